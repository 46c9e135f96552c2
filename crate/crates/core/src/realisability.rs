//! Modified realisability with truth, in two flavours: `Mr` over the crude
//! types and `MrPrime` over the padded crude types.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::check_value;
use crate::kernel::enumerate::{enum_ty, eval_condition, unfold, KernelError};
use crate::kernel::eval::EvalError;
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::value::{Env, Value};
use crate::prop::{cr, cr_prime, tp, Prop};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Realisers live in `cr`.
    Mr,
    /// Realisers live in `cr_prime`; existentials may be realised by `inl`.
    #[serde(rename = "mrp")]
    MrPrime,
    /// `Mr` with the absurdity clause corrupted to `Unit`. Only used to
    /// self-test the soundness harness.
    #[doc(hidden)]
    #[serde(rename = "mutant")]
    Mutant,
}

impl Variant {
    /// The crude type realisers of `s` inhabit.
    pub fn crude(self, s: &Prop) -> Ty {
        match self {
            Variant::MrPrime => cr_prime(s),
            Variant::Mr | Variant::Mutant => cr(s),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Mr => "mr",
            Variant::MrPrime => "mrp",
            Variant::Mutant => "mutant",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Variant, String> {
        match s {
            "mr" => Ok(Variant::Mr),
            "mrp" | "mr'" | "mr-prime" => Ok(Variant::MrPrime),
            "mutant" => Ok(Variant::Mutant),
            other => Err(format!("unknown variant `{other}` (expected mr or mrp)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealisabilityError {
    #[error("ill-typed realiser: {0}")]
    IllTypedRealiser(String),
    #[error("ill-typed witness: {0}")]
    IllTypedWitness(String),
    #[error("unreachable branch: {0}")]
    Unreachable(String),
    #[error("proposition is not closed")]
    OpenProposition,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

type Result<T> = std::result::Result<T, RealisabilityError>;

/// A realiser together with the small type expressing that it realises.
#[derive(Debug, Clone)]
pub struct MrJudgement {
    pub prop: Prop,
    pub realiser: Value,
    pub variant: Variant,
    pub witness_type: Ty,
}

impl MrJudgement {
    pub fn new(prop: Prop, realiser: Value, variant: Variant) -> Result<MrJudgement> {
        let witness_type = mr_type_for(&prop, &realiser, variant)?;
        Ok(MrJudgement {
            prop,
            realiser,
            variant,
            witness_type,
        })
    }
}

pub fn mr_type(s: &Prop, r: &Value) -> Result<Ty> {
    mr_type_for(s, r, Variant::Mr)
}

pub fn mr_prime_type(s: &Prop, r: &Value) -> Result<Ty> {
    mr_type_for(s, r, Variant::MrPrime)
}

/// The type of evidence that `r` realises the closed proposition `s`.
pub fn mr_type_for(s: &Prop, r: &Value, variant: Variant) -> Result<Ty> {
    if !s.is_closed() {
        return Err(RealisabilityError::OpenProposition);
    }
    if !check_value(r, &variant.crude(s)) {
        return Err(RealisabilityError::IllTypedRealiser(format!(
            "{r:?} is not an element of the crude type"
        )));
    }
    mr_type_unchecked(s, r, variant)
}

pub(crate) fn mr_type_unchecked(s: &Prop, r: &Value, variant: Variant) -> Result<Ty> {
    let ill = || RealisabilityError::IllTypedRealiser(format!("{r:?}"));
    Ok(match s {
        Prop::Absurd => match variant {
            Variant::Mutant => Ty::Unit,
            _ => Ty::Empty,
        },
        Prop::Atom(a) => (**a).clone(),
        Prop::And(a, b) => {
            let (x, y) = (r.fst().ok_or_else(ill)?, r.snd().ok_or_else(ill)?);
            Ty::prod(
                mr_type_unchecked(a, x, variant)?,
                mr_type_unchecked(b, y, variant)?,
            )
        }
        Prop::Or(a, b) => match r {
            Value::Inl(x) => mr_type_unchecked(a, x, variant)?,
            Value::Inr(y) => mr_type_unchecked(b, y, variant)?,
            _ => return Err(ill()),
        },
        Prop::Implies(a, b) => {
            // (Tp A -> Tp B) x (Pi s : Cr A)(MR(A, s) -> MR(B, r s))
            let hyp = Ty::Mr {
                prop: Arc::new(a.shift(1)),
                realiser: Arc::new(Term::Var(0)),
                variant,
            };
            let concl = Ty::Mr {
                prop: Arc::new(b.shift(1)),
                realiser: Arc::new(Term::app(Term::Val(r.clone()), Term::Var(0))),
                variant,
            };
            Ty::prod(
                Ty::fun(tp(a), tp(b)),
                Ty::pi(variant.crude(a), Ty::fun(hyp, concl)),
            )
        }
        Prop::Forall(d, p) => Ty::pi(
            (**d).clone(),
            Ty::Mr {
                prop: p.clone(),
                realiser: Arc::new(Term::app(Term::Val(r.clone()), Term::Var(0))),
                variant,
            },
        ),
        Prop::Exists(_, p) => {
            let payload = match variant {
                Variant::MrPrime => match r {
                    Value::Inl(_) => return Ok(Ty::Empty),
                    Value::Inr(t) => &**t,
                    _ => return Err(ill()),
                },
                _ => r,
            };
            let (x, w) = (
                payload.fst().ok_or_else(ill)?,
                payload.snd().ok_or_else(ill)?,
            );
            mr_type_unchecked(&p.instantiate_value(x), w, variant)?
        }
    })
}

/// Some inhabitant of `ty` if one exists, searching `Nat` only up to
/// `nat_bound`. Complete on fully finite types.
pub fn decide_inhabited(
    ty: &Ty,
    nat_bound: u64,
) -> std::result::Result<Option<Value>, KernelError> {
    inhabit(ty, nat_bound)
}

fn inhabit(ty: &Ty, bound: u64) -> std::result::Result<Option<Value>, KernelError> {
    Ok(match ty {
        Ty::Empty | Ty::Fin(0) => None,
        Ty::Unit => Some(Value::Elt),
        Ty::Nat => Some(Value::Nat(0)),
        Ty::Bool => Some(Value::Bool(false)),
        Ty::Fin(_) => Some(Value::Fin(0)),
        Ty::Sum(l, r) => match inhabit(l, bound)? {
            Some(v) => Some(Value::inl(v)),
            None => inhabit(r, bound)?.map(Value::inr),
        },
        Ty::Prod(x, y) => match inhabit(x, bound)? {
            None => None,
            Some(a) => inhabit(y, bound)?.map(|b| Value::pair(a, b)),
        },
        Ty::Sigma(d, c) => {
            let mut partial = false;
            let mut found = None;
            for a in enum_ty(d, Some(bound), &mut partial)? {
                if let Some(b) = inhabit(&c.instantiate_value(&a), bound)? {
                    found = Some(Value::pair(a, b));
                    break;
                }
            }
            found
        }
        Ty::Fun(d, c) => constant_or_empty(d, c, bound)?,
        Ty::Pi(d, c) => match c.strengthen() {
            Some(c) => constant_or_empty(d, &c, bound)?,
            None => {
                let mut partial = false;
                let mut graph = Vec::new();
                for a in enum_ty(d, Some(bound), &mut partial)? {
                    match inhabit(&c.instantiate_value(&a), bound)? {
                        Some(b) => graph.push((a, b)),
                        None => return Ok(None),
                    }
                }
                Some(Value::Graph(Arc::new(graph)))
            }
        },
        Ty::Holds(c) => eval_condition(c)?.then_some(Value::Elt),
        Ty::Mr { .. } => inhabit(&unfold(ty)?, bound)?,
    })
}

fn constant_or_empty(
    dom: &Ty,
    cod: &Ty,
    bound: u64,
) -> std::result::Result<Option<Value>, KernelError> {
    if let Some(b) = inhabit(cod, bound)? {
        let body = Term::quote(&b).shift(1);
        return Ok(Some(Value::Closure(Env::new(), Arc::new(body))));
    }
    Ok(match inhabit(dom, bound)? {
        Some(_) => None,
        None => Some(Value::Graph(Arc::new(Vec::new()))),
    })
}

/// Realised implies true: turn a witness of `MR(s, r)` into an element of
/// `tp(s)`.
pub fn correctness(s: &Prop, r: &Value, w: &Value) -> Result<Value> {
    correctness_for(s, r, w, Variant::Mr)
}

pub fn correctness_prime(s: &Prop, r: &Value, w: &Value) -> Result<Value> {
    correctness_for(s, r, w, Variant::MrPrime)
}

pub fn correctness_for(s: &Prop, r: &Value, w: &Value, variant: Variant) -> Result<Value> {
    let wt = mr_type_for(s, r, variant)?;
    if !check_value(w, &wt) {
        return Err(RealisabilityError::IllTypedWitness(format!("{w:?}")));
    }
    correct_unchecked(s, r, w, variant)
}

pub(crate) fn correct_unchecked(s: &Prop, r: &Value, w: &Value, variant: Variant) -> Result<Value> {
    let bad_r = || RealisabilityError::IllTypedRealiser(format!("{r:?}"));
    let bad_w = || RealisabilityError::IllTypedWitness(format!("{w:?}"));
    Ok(match s {
        Prop::Absurd => {
            return Err(RealisabilityError::IllTypedWitness(
                "absurdity has no realisability witness".into(),
            ))
        }
        Prop::Atom(_) => w.clone(),
        Prop::And(a, b) => Value::pair(
            correct_unchecked(
                a,
                r.fst().ok_or_else(bad_r)?,
                w.fst().ok_or_else(bad_w)?,
                variant,
            )?,
            correct_unchecked(
                b,
                r.snd().ok_or_else(bad_r)?,
                w.snd().ok_or_else(bad_w)?,
                variant,
            )?,
        ),
        Prop::Or(a, b) => match r {
            Value::Inl(x) => Value::inl(correct_unchecked(a, x, w, variant)?),
            Value::Inr(y) => Value::inr(correct_unchecked(b, y, w, variant)?),
            _ => return Err(bad_r()),
        },
        // The first component of the witness already is the truth.
        Prop::Implies(..) => w.fst().ok_or_else(bad_w)?.clone(),
        Prop::Forall(_, p) => {
            let (p, r, w) = (p.clone(), r.clone(), w.clone());
            Value::native("correctness", move |ev, a| {
                let ra = ev.apply(&r, a.clone())?;
                let wa = ev.apply(&w, a.clone())?;
                correct_unchecked(&p.instantiate_value(&a), &ra, &wa, variant)
                    .map_err(|e| EvalError::Native(e.to_string()))
            })
        }
        Prop::Exists(_, p) => {
            let payload = match (variant, r) {
                (Variant::MrPrime, Value::Inl(_)) => {
                    return Err(RealisabilityError::Unreachable(
                        "witness of absurdity for an inl realiser".into(),
                    ))
                }
                (Variant::MrPrime, Value::Inr(t)) => &**t,
                (Variant::MrPrime, _) => return Err(bad_r()),
                _ => r,
            };
            let x = payload.fst().ok_or_else(bad_r)?;
            let y = payload.snd().ok_or_else(bad_r)?;
            Value::pair(
                x.clone(),
                correct_unchecked(&p.instantiate_value(x), y, w, variant)?,
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval::closure;

    fn holds(b: bool) -> Prop {
        Prop::holds(Term::Bool(b))
    }

    #[test]
    fn mr_clauses() {
        assert_eq!(mr_type(&Prop::Absurd, &Value::Elt).unwrap(), Ty::Empty);
        assert_eq!(mr_type(&Prop::atom(Ty::Nat), &Value::Elt).unwrap(), Ty::Nat);
        let or = Prop::or(Prop::atom(Ty::Nat), Prop::Absurd);
        assert_eq!(
            mr_type(&or, &Value::inl(Value::Elt)).unwrap(),
            mr_type(&Prop::atom(Ty::Nat), &Value::Elt).unwrap()
        );
    }

    #[test]
    fn mr_prime_existential_clauses() {
        let body = Prop::holds(Term::eq(Term::Var(0), Term::Fin(1)));
        let ex = Prop::exists(Ty::Fin(2), body.clone());
        assert_eq!(
            mr_prime_type(&ex, &Value::inl(Value::Elt)).unwrap(),
            Ty::Empty
        );
        let r = Value::inr(Value::pair(Value::Fin(1), Value::Elt));
        assert_eq!(
            mr_prime_type(&ex, &r).unwrap(),
            mr_prime_type(&body.instantiate_value(&Value::Fin(1)), &Value::Elt).unwrap()
        );
        let and = Prop::and(holds(true), Prop::Absurd);
        assert_eq!(
            mr_prime_type(&and, &Value::pair(Value::Elt, Value::Elt)).unwrap(),
            Ty::prod(Ty::holds(Term::Bool(true)), Ty::Empty)
        );
    }

    #[test]
    fn ill_typed_realisers_are_rejected() {
        let err = mr_type(&Prop::Absurd, &Value::Nat(0)).unwrap_err();
        assert!(matches!(err, RealisabilityError::IllTypedRealiser(_)));
    }

    #[test]
    fn decide_inhabited_examples() {
        assert_eq!(decide_inhabited(&Ty::Empty, 3).unwrap(), None);
        let t = Ty::sum(Ty::Unit, Ty::sigma(Ty::Empty, Ty::Unit));
        assert_eq!(
            decide_inhabited(&t, 3).unwrap(),
            Some(Value::inl(Value::Elt))
        );
        let pi = Ty::pi(Ty::Fin(2), Ty::holds(Term::Bool(true)));
        let f = decide_inhabited(&pi, 3).unwrap().unwrap();
        assert!(check_value(&f, &pi));
        let dep = Ty::pi(Ty::Fin(2), Ty::holds(Term::eq(Term::Var(0), Term::Fin(0))));
        assert_eq!(decide_inhabited(&dep, 3).unwrap(), None);
    }

    #[test]
    fn correctness_examples() {
        assert_eq!(
            correctness(&Prop::atom(Ty::Nat), &Value::Elt, &Value::Nat(5)).unwrap(),
            Value::Nat(5)
        );
        let or = Prop::or(holds(true), Prop::Absurd);
        let v = correctness(&or, &Value::inl(Value::Elt), &Value::Elt).unwrap();
        assert_eq!(v, Value::inl(Value::Elt));
        // forall x : Fin 2. x <= 1
        let all = Prop::forall(
            Ty::Fin(2),
            Prop::holds(Term::le(Term::Var(0), Term::Fin(1))),
        );
        let r = closure(Term::Elt);
        let w = closure(Term::Elt);
        let truth = correctness(&all, &r, &w).unwrap();
        assert!(check_value(&truth, &tp(&all)));
    }

    #[test]
    fn correctness_prime_on_inl_is_unreachable() {
        let ex = Prop::exists(Ty::Fin(2), holds(true));
        assert_eq!(
            decide_inhabited(&mr_prime_type(&ex, &Value::inl(Value::Elt)).unwrap(), 2).unwrap(),
            None
        );
        let r = Value::inr(Value::pair(Value::Fin(0), Value::Elt));
        let v = correctness_prime(&ex, &r, &Value::Elt).unwrap();
        assert_eq!(v, Value::pair(Value::Fin(0), Value::Elt));
    }
}
