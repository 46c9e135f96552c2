//! Call-by-value evaluation of closed terms with a step counter.

use std::sync::Arc;

use thiserror::Error;

use super::syntax::Term;
use super::value::{Env, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("stuck term: {0}")]
    StuckTerm(String),
    /// The `Empty` eliminator was reached with an actual value.
    #[error("absurdity eliminator reached")]
    EmptyElimination,
    #[error("finite function applied outside its domain: {0}")]
    OutsideDomain(String),
    #[error("{0}")]
    Native(String),
}

/// Per-call evaluation context. Each visited term node counts as one step.
#[derive(Debug, Default, Clone)]
pub struct Evaluator {
    steps: u64,
}

impl Evaluator {
    pub fn new() -> Evaluator {
        Evaluator::default()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn eval(&mut self, t: &Term, env: &Env) -> Result<Value, EvalError> {
        use Term::*;
        self.steps += 1;
        Ok(match t {
            Var(i) => env.get(*i).cloned().ok_or(EvalError::UnboundVariable(*i))?,
            Lam(body) => Value::Closure(env.clone(), body.clone()),
            App(f, x) => {
                let f = self.eval(f, env)?;
                let x = self.eval(x, env)?;
                self.apply(&f, x)?
            }
            Pair(x, y) => Value::pair(self.eval(x, env)?, self.eval(y, env)?),
            Fst(x) => match self.eval(x, env)? {
                Value::Pair(p, _) => (*p).clone(),
                v => return Err(stuck("first projection", &v)),
            },
            Snd(x) => match self.eval(x, env)? {
                Value::Pair(_, q) => (*q).clone(),
                v => return Err(stuck("second projection", &v)),
            },
            Inl(x) => Value::inl(self.eval(x, env)?),
            Inr(x) => Value::inr(self.eval(x, env)?),
            Case(s, l, r) => match self.eval(s, env)? {
                Value::Inl(v) => self.eval(l, &env.push((*v).clone()))?,
                Value::Inr(v) => self.eval(r, &env.push((*v).clone()))?,
                v => return Err(stuck("case", &v)),
            },
            Elt => Value::Elt,
            Nat(n) => Value::Nat(*n),
            Succ(x) => match self.eval(x, env)? {
                Value::Nat(n) => Value::Nat(n + 1),
                v => return Err(stuck("succ", &v)),
            },
            Add(x, y) => match (self.eval(x, env)?, self.eval(y, env)?) {
                (Value::Nat(a), Value::Nat(b)) => Value::Nat(a + b),
                (v, _) => return Err(stuck("addition", &v)),
            },
            Rec {
                scrutinee,
                base,
                step,
                ..
            } => {
                let n = match self.eval(scrutinee, env)? {
                    Value::Nat(n) => n,
                    v => return Err(stuck("rec", &v)),
                };
                let mut acc = self.eval(base, env)?;
                for i in 0..n {
                    let inner = env.push(Value::Nat(i)).push(acc);
                    acc = self.eval(step, &inner)?;
                }
                acc
            }
            Fin(i) => Value::Fin(*i),
            Bool(b) => Value::Bool(*b),
            Eq(x, y) => {
                let (a, b) = (self.eval(x, env)?, self.eval(y, env)?);
                match a.first_order_eq(&b) {
                    Some(r) => Value::Bool(r),
                    None => return Err(EvalError::StuckTerm("equality on functions".into())),
                }
            }
            Le(x, y) => match (self.eval(x, env)?, self.eval(y, env)?) {
                (Value::Nat(a), Value::Nat(b)) => Value::Bool(a <= b),
                (Value::Fin(a), Value::Fin(b)) => Value::Bool(a <= b),
                (v, _) => return Err(stuck("comparison", &v)),
            },
            Not(x) => Value::Bool(!self.eval_bool(x, env)?),
            And(x, y) => Value::Bool(self.eval_bool(x, env)? && self.eval_bool(y, env)?),
            Or(x, y) => Value::Bool(self.eval_bool(x, env)? || self.eval_bool(y, env)?),
            Absurd(x) => {
                self.eval(x, env)?;
                return Err(EvalError::EmptyElimination);
            }
            Val(v) => v.clone(),
        })
    }

    fn eval_bool(&mut self, t: &Term, env: &Env) -> Result<bool, EvalError> {
        match self.eval(t, env)? {
            Value::Bool(b) => Ok(b),
            v => Err(stuck("boolean connective", &v)),
        }
    }

    pub fn apply(&mut self, f: &Value, x: Value) -> Result<Value, EvalError> {
        match f {
            Value::Closure(env, body) => {
                let env = env.push(x);
                self.eval(body, &env)
            }
            Value::Graph(graph) => {
                self.steps += 1;
                for (k, v) in graph.iter() {
                    if self.key_matches(k, &x) {
                        return Ok(v.clone());
                    }
                }
                Err(EvalError::OutsideDomain(format!("{x:?}")))
            }
            Value::Native(n) => n.call(self, x),
            v => Err(stuck("application", v)),
        }
    }

    /// Whether `x` is the graph key `k`. Keys that are functions are
    /// themselves total graphs and are compared pointwise.
    fn key_matches(&mut self, k: &Value, x: &Value) -> bool {
        match (k, x) {
            (Value::Pair(a1, a2), Value::Pair(b1, b2)) => {
                self.key_matches(a1, b1) && self.key_matches(a2, b2)
            }
            (Value::Inl(a), Value::Inl(b)) | (Value::Inr(a), Value::Inr(b)) => {
                self.key_matches(a, b)
            }
            (Value::Graph(g), f) if f.is_function() => g.iter().all(|(a, b)| {
                self.apply(f, a.clone())
                    .is_ok_and(|fa| self.key_matches(b, &fa))
            }),
            _ => k.first_order_eq(x) == Some(true),
        }
    }

    pub fn apply2(&mut self, f: &Value, x: Value, y: Value) -> Result<Value, EvalError> {
        let g = self.apply(f, x)?;
        self.apply(&g, y)
    }
}

fn stuck(what: &str, v: &Value) -> EvalError {
    EvalError::StuckTerm(format!("{what} applied to {v:?}"))
}

/// Evaluate with a fresh step counter.
pub fn eval(t: &Term, env: &Env) -> Result<Value, EvalError> {
    Evaluator::new().eval(t, env)
}

/// Evaluate a closed term, returning the value and the number of steps.
pub fn eval_counted(t: &Term) -> Result<(Value, u64), EvalError> {
    let mut ev = Evaluator::new();
    let v = ev.eval(t, &Env::new())?;
    Ok((v, ev.steps()))
}

/// Apply a closed value to arguments with a fresh evaluator.
pub fn apply(f: &Value, x: Value) -> Result<Value, EvalError> {
    Evaluator::new().apply(f, x)
}

pub fn closure(body: Term) -> Value {
    Value::Closure(Env::new(), Arc::new(body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::syntax::Ty;

    fn copy_rec(n: u64) -> Term {
        // rec(\z. Nat, n, 0, \x.\y. succ y)
        Term::rec(
            Ty::Nat,
            Term::Nat(n),
            Term::Nat(0),
            Term::succ(Term::Var(0)),
        )
    }

    #[test]
    fn elt_is_canonical() {
        assert_eq!(eval(&Term::Elt, &Env::new()).unwrap(), Value::Elt);
    }

    #[test]
    fn primitive_recursion_copies_argument() {
        assert_eq!(eval(&copy_rec(3), &Env::new()).unwrap(), Value::Nat(3));
        assert_eq!(eval(&copy_rec(0), &Env::new()).unwrap(), Value::Nat(0));
    }

    #[test]
    fn evaluation_is_deterministic_in_value_and_steps() {
        let t = Term::app(Term::lam(copy_rec(7)), Term::Elt);
        let (v1, s1) = eval_counted(&t).unwrap();
        let (v2, s2) = eval_counted(&t).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(s1, s2);
        assert!(s1 > 7);
    }

    #[test]
    fn errors_are_reported() {
        assert_eq!(
            eval(&Term::Var(0), &Env::new()),
            Err(EvalError::UnboundVariable(0))
        );
        assert!(matches!(
            eval(&Term::fst(Term::Elt), &Env::new()),
            Err(EvalError::StuckTerm(_))
        ));
        assert_eq!(
            eval(&Term::absurd(Term::Elt), &Env::new()),
            Err(EvalError::EmptyElimination)
        );
    }

    #[test]
    fn case_binds_payload() {
        let t = Term::case(
            Term::inr(Term::Nat(4)),
            Term::Nat(0),
            Term::succ(Term::Var(0)),
        );
        assert_eq!(eval(&t, &Env::new()).unwrap(), Value::Nat(5));
    }

    #[test]
    fn concurrent_evaluations_do_not_interfere() {
        let t = Arc::new(copy_rec(50));
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let t = t.clone();
                std::thread::spawn(move || eval_counted(&t).unwrap())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
