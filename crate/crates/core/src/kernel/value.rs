use std::fmt;
use std::sync::Arc;

use super::eval::{EvalError, Evaluator};
use super::syntax::Term;

/// Canonical forms. Realisers, truth witnesses and MR witnesses all live here.
#[derive(Clone)]
pub enum Value {
    Elt,
    Nat(u64),
    Fin(u32),
    Bool(bool),
    Pair(Arc<Value>, Arc<Value>),
    Inl(Arc<Value>),
    Inr(Arc<Value>),
    /// A lambda body (binding one variable) together with its environment.
    Closure(Env, Arc<Term>),
    /// A function given by its finite graph, as produced by enumeration.
    Graph(Arc<Vec<(Value, Value)>>),
    /// A host-level function. Witness transformers built while extracting
    /// are represented this way.
    Native(Native),
}

type NativeFn = dyn Fn(&mut Evaluator, Value) -> Result<Value, EvalError> + Send + Sync;

#[derive(Clone)]
pub struct Native {
    name: Arc<str>,
    f: Arc<NativeFn>,
}

impl Native {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn call(&self, ev: &mut Evaluator, arg: Value) -> Result<Value, EvalError> {
        (self.f)(ev, arg)
    }
}

impl Value {
    pub fn pair(x: Value, y: Value) -> Value {
        Value::Pair(Arc::new(x), Arc::new(y))
    }
    pub fn inl(x: Value) -> Value {
        Value::Inl(Arc::new(x))
    }
    pub fn inr(x: Value) -> Value {
        Value::Inr(Arc::new(x))
    }

    pub fn native(
        name: &str,
        f: impl Fn(&mut Evaluator, Value) -> Result<Value, EvalError> + Send + Sync + 'static,
    ) -> Value {
        Value::Native(Native {
            name: name.into(),
            f: Arc::new(f),
        })
    }

    pub fn is_function(&self) -> bool {
        matches!(
            self,
            Value::Closure(..) | Value::Graph(_) | Value::Native(_)
        )
    }

    /// Structural equality on first-order values; `None` if either side
    /// contains a function.
    pub fn first_order_eq(&self, other: &Value) -> Option<bool> {
        use Value::*;
        match (self, other) {
            (Elt, Elt) => Some(true),
            (Nat(a), Nat(b)) => Some(a == b),
            (Fin(a), Fin(b)) => Some(a == b),
            (Bool(a), Bool(b)) => Some(a == b),
            (Pair(a1, a2), Pair(b1, b2)) => match a1.first_order_eq(b1)? {
                false => Some(false),
                true => a2.first_order_eq(b2),
            },
            (Inl(a), Inl(b)) | (Inr(a), Inr(b)) => a.first_order_eq(b),
            (Inl(_), Inr(_)) | (Inr(_), Inl(_)) => Some(false),
            (x, y) if x.is_function() || y.is_function() => None,
            _ => Some(false),
        }
    }

    pub fn fst(&self) -> Option<&Value> {
        match self {
            Value::Pair(x, _) => Some(x),
            _ => None,
        }
    }

    pub fn snd(&self) -> Option<&Value> {
        match self {
            Value::Pair(_, y) => Some(y),
            _ => None,
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Value::Nat(n) => Some(*n),
            _ => None,
        }
    }
}

/// Structural on first-order parts; functions compare by identity.
impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        use Value::*;
        match (self, other) {
            (Closure(e1, b1), Closure(e2, b2)) => Arc::ptr_eq(b1, b2) && e1.ptr_eq(e2),
            (Graph(g1), Graph(g2)) => Arc::ptr_eq(g1, g2) || g1 == g2,
            (Native(n1), Native(n2)) => Arc::ptr_eq(&n1.f, &n2.f),
            (Pair(a1, a2), Pair(b1, b2)) => a1 == b1 && a2 == b2,
            (Inl(a), Inl(b)) | (Inr(a), Inr(b)) => a == b,
            (Elt, Elt) => true,
            (Nat(a), Nat(b)) => a == b,
            (Fin(a), Fin(b)) => a == b,
            (Bool(a), Bool(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Elt => write!(f, "e"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Fin(i) => write!(f, "#{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Pair(x, y) => write!(f, "<{x:?}; {y:?}>"),
            Value::Inl(x) => write!(f, "inl({x:?})"),
            Value::Inr(x) => write!(f, "inr({x:?})"),
            Value::Closure(_, body) => write!(f, "closure({body:?})"),
            Value::Graph(g) => {
                write!(f, "{{")?;
                for (i, (k, v)) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k:?} -> {v:?}")?;
                }
                write!(f, "}}")
            }
            Value::Native(n) => write!(f, "<native {}>", n.name),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Persistent environment; index 0 is the most recently bound value.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

struct EnvNode {
    head: Value,
    tail: Env,
    len: usize,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn from_values(innermost_first: &[Value]) -> Env {
        innermost_first
            .iter()
            .rev()
            .fold(Env::new(), |env, v| env.push(v.clone()))
    }

    pub fn push(&self, v: Value) -> Env {
        Env(Some(Arc::new(EnvNode {
            head: v,
            tail: self.clone(),
            len: self.len() + 1,
        })))
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn get(&self, index: usize) -> Option<&Value> {
        let mut cur = self;
        let mut i = index;
        loop {
            let node = cur.0.as_ref()?;
            if i == 0 {
                return Some(&node.head);
            }
            i -= 1;
            cur = &node.tail;
        }
    }

    /// Values innermost first.
    pub fn to_vec(&self) -> Vec<Value> {
        (0..self.len())
            .filter_map(|i| self.get(i).cloned())
            .collect()
    }

    fn ptr_eq(&self, other: &Env) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_vec()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_indexes_innermost_first() {
        let env = Env::new().push(Value::Nat(1)).push(Value::Nat(2));
        assert_eq!(env.len(), 2);
        assert_eq!(env.get(0), Some(&Value::Nat(2)));
        assert_eq!(env.get(1), Some(&Value::Nat(1)));
        assert!(env.get(2).is_none());
        let back = Env::from_values(&env.to_vec());
        assert_eq!(back.to_vec(), env.to_vec());
    }

    #[test]
    fn closures_are_not_first_order_comparable() {
        let c = Value::Closure(Env::new(), Arc::new(Term::Var(0)));
        assert_eq!(c.first_order_eq(&c), None);
        assert_eq!(
            Value::inl(Value::Elt).first_order_eq(&Value::inr(Value::Elt)),
            Some(false)
        );
    }
}
