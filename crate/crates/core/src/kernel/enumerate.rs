//! Exhaustive enumeration of finite types and membership checking.

use std::sync::Arc;

use thiserror::Error;

use super::eval::{EvalError, Evaluator};
use super::syntax::{Binders, Ty};
use super::value::{Env, Value};
use crate::realisability;

/// Upper bound on the number of values a single enumeration may produce.
pub const ENUMERATION_LIMIT: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("type is not enumerable: {0}")]
    NotEnumerable(String),
    #[error("enumeration exceeds {ENUMERATION_LIMIT} values")]
    TooLarge,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("cannot unfold realisability type: {0}")]
    Unfold(String),
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub values: Vec<Value>,
    /// Set when some `Nat` component was truncated to the bound.
    pub partial: bool,
}

/// All canonical inhabitants of `ty`, with `Nat` truncated to `0..=nat_bound`.
pub fn enumerate(ty: &Ty, nat_bound: u64) -> Result<Enumeration, KernelError> {
    let mut partial = false;
    let values = enum_ty(ty, Some(nat_bound), &mut partial)?;
    Ok(Enumeration { values, partial })
}

/// Evaluate a closed boolean condition.
pub fn eval_condition(cond: &super::syntax::Term) -> Result<bool, KernelError> {
    if !cond.is_closed() {
        return Err(KernelError::NotEnumerable("open condition".into()));
    }
    match Evaluator::new().eval(cond, &Env::new())? {
        Value::Bool(b) => Ok(b),
        v => Err(EvalError::StuckTerm(format!("condition evaluated to {v:?}")).into()),
    }
}

/// One unfolding step of a deferred realisability type.
pub fn unfold(ty: &Ty) -> Result<Ty, KernelError> {
    match ty {
        Ty::Mr {
            prop,
            realiser,
            variant,
        } => {
            if !realiser.is_closed() || !prop.is_closed() {
                return Err(KernelError::NotEnumerable("open realisability type".into()));
            }
            let r = Evaluator::new().eval(realiser, &Env::new())?;
            realisability::mr_type_unchecked(prop, &r, *variant)
                .map_err(|e| KernelError::Unfold(e.to_string()))
        }
        _ => Ok(ty.clone()),
    }
}

pub(crate) fn enum_ty(
    ty: &Ty,
    nat_bound: Option<u64>,
    partial: &mut bool,
) -> Result<Vec<Value>, KernelError> {
    let out = match ty {
        Ty::Empty => vec![],
        Ty::Unit => vec![Value::Elt],
        Ty::Bool => vec![Value::Bool(false), Value::Bool(true)],
        Ty::Fin(n) => (0..*n).map(Value::Fin).collect(),
        Ty::Nat => match nat_bound {
            Some(b) => {
                *partial = true;
                if b as usize >= ENUMERATION_LIMIT {
                    return Err(KernelError::TooLarge);
                }
                (0..=b).map(Value::Nat).collect()
            }
            None => return Err(KernelError::NotEnumerable("Nat without a bound".into())),
        },
        Ty::Sum(l, r) => {
            let mut out: Vec<Value> = enum_ty(l, nat_bound, partial)?
                .into_iter()
                .map(Value::inl)
                .collect();
            out.extend(enum_ty(r, nat_bound, partial)?.into_iter().map(Value::inr));
            out
        }
        Ty::Prod(..) | Ty::Sigma(..) => {
            let (dom, _) = split(ty);
            let mut out = Vec::new();
            for a in enum_ty(dom, nat_bound, partial)? {
                let fam = ty.family_at(&a).expect("pair type");
                for b in enum_ty(&fam, nat_bound, partial)? {
                    out.push(Value::pair(a.clone(), b));
                    if out.len() > ENUMERATION_LIMIT {
                        return Err(KernelError::TooLarge);
                    }
                }
            }
            out
        }
        Ty::Fun(..) | Ty::Pi(..) => {
            let (dom, _) = split(ty);
            let mut dom_partial = false;
            let points = enum_ty(dom, nat_bound, &mut dom_partial)?;
            if dom_partial {
                return Err(KernelError::NotEnumerable(
                    "function space over an infinite domain".into(),
                ));
            }
            let mut columns = Vec::with_capacity(points.len());
            let mut total: usize = 1;
            for a in &points {
                let fam = ty.family_at(a).expect("function type");
                let col = enum_ty(&fam, nat_bound, partial)?;
                total = total.saturating_mul(col.len());
                if total > ENUMERATION_LIMIT {
                    return Err(KernelError::TooLarge);
                }
                columns.push(col);
            }
            // Cartesian product of the columns, first point varying slowest.
            let mut graphs: Vec<Vec<(Value, Value)>> = vec![Vec::new()];
            for (a, col) in points.iter().zip(&columns) {
                let mut next = Vec::with_capacity(graphs.len() * col.len());
                for g in &graphs {
                    for b in col {
                        let mut g2 = g.clone();
                        g2.push((a.clone(), b.clone()));
                        next.push(g2);
                    }
                }
                graphs = next;
            }
            graphs
                .into_iter()
                .map(|g| Value::Graph(Arc::new(g)))
                .collect()
        }
        Ty::Holds(c) => {
            if eval_condition(c)? {
                vec![Value::Elt]
            } else {
                vec![]
            }
        }
        Ty::Mr { .. } => enum_ty(&unfold(ty)?, nat_bound, partial)?,
    };
    if out.len() > ENUMERATION_LIMIT {
        return Err(KernelError::TooLarge);
    }
    Ok(out)
}

fn split(ty: &Ty) -> (&Ty, &Ty) {
    match ty {
        Ty::Prod(a, b) | Ty::Sigma(a, b) | Ty::Fun(a, b) | Ty::Pi(a, b) | Ty::Sum(a, b) => (a, b),
        _ => unreachable!("split on non-binary type"),
    }
}

/// Analytic number of inhabitants of a fully finite type, `None` when some
/// component is infinite or cannot be evaluated.
pub fn cardinality(ty: &Ty) -> Option<u128> {
    match ty {
        Ty::Empty => Some(0),
        Ty::Unit => Some(1),
        Ty::Bool => Some(2),
        Ty::Fin(n) => Some(*n as u128),
        Ty::Nat => None,
        Ty::Sum(l, r) => cardinality(l)?.checked_add(cardinality(r)?),
        Ty::Prod(l, r) => cardinality(l)?.checked_mul(cardinality(r)?),
        Ty::Fun(l, r) => {
            let base = cardinality(r)?;
            let exp = u32::try_from(cardinality(l)?).ok()?;
            base.checked_pow(exp)
        }
        Ty::Sigma(d, _) => {
            let mut total: u128 = 0;
            for a in points(d)? {
                total = total.checked_add(cardinality(&ty.family_at(&a)?)?)?;
            }
            Some(total)
        }
        Ty::Pi(d, _) => {
            let mut total: u128 = 1;
            for a in points(d)? {
                total = total.checked_mul(cardinality(&ty.family_at(&a)?)?)?;
            }
            Some(total)
        }
        Ty::Holds(c) => eval_condition(c).ok().map(u128::from),
        Ty::Mr { .. } => cardinality(&unfold(ty).ok()?),
    }
}

fn points(dom: &Ty) -> Option<Vec<Value>> {
    let mut partial = false;
    let pts = enum_ty(dom, None, &mut partial).ok()?;
    (!partial).then_some(pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    /// Some function was only checked at a truncated or empty set of points.
    pub shallow: bool,
}

/// Membership test. Functions over `Nat` are only checked structurally.
pub fn check_value(v: &Value, ty: &Ty) -> bool {
    check_value_bounded(v, ty, None).valid
}

/// Membership test; functions over `Nat` are checked at `0..=nat_bound`.
pub fn check_value_bounded(v: &Value, ty: &Ty, nat_bound: Option<u64>) -> CheckReport {
    let mut shallow = false;
    let mut ev = Evaluator::new();
    let valid = check(v, ty, nat_bound, &mut ev, &mut shallow);
    CheckReport { valid, shallow }
}

fn check(v: &Value, ty: &Ty, bound: Option<u64>, ev: &mut Evaluator, shallow: &mut bool) -> bool {
    match (ty, v) {
        (Ty::Empty, _) => false,
        (Ty::Unit, Value::Elt) => true,
        (Ty::Nat, Value::Nat(_)) => true,
        (Ty::Bool, Value::Bool(_)) => true,
        (Ty::Fin(n), Value::Fin(i)) => i < n,
        (Ty::Sum(l, _), Value::Inl(x)) => check(x, l, bound, ev, shallow),
        (Ty::Sum(_, r), Value::Inr(x)) => check(x, r, bound, ev, shallow),
        (Ty::Prod(d, _) | Ty::Sigma(d, _), Value::Pair(x, y)) => {
            check(x, d, bound, ev, shallow)
                && ty
                    .family_at(x)
                    .is_some_and(|fam| check(y, &fam, bound, ev, shallow))
        }
        (Ty::Fun(d, _) | Ty::Pi(d, _), f) if f.is_function() => {
            let mut partial = false;
            match enum_ty(d, bound, &mut partial) {
                Ok(pts) => {
                    if partial {
                        *shallow = true;
                    }
                    pts.into_iter().all(|a| {
                        let fam = ty.family_at(&a).expect("function type");
                        match ev.apply(f, a) {
                            Ok(b) => check(&b, &fam, bound, ev, shallow),
                            Err(_) => false,
                        }
                    })
                }
                Err(_) => {
                    *shallow = true;
                    true
                }
            }
        }
        (Ty::Holds(c), v) => matches!(v, Value::Elt) && eval_condition(c).unwrap_or(false),
        (Ty::Mr { .. }, v) => match unfold(ty) {
            Ok(t) => check(v, &t, bound, ev, shallow),
            Err(_) => false,
        },
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::syntax::Term;

    #[test]
    fn empty_has_no_inhabitants() {
        assert!(enumerate(&Ty::Empty, 3).unwrap().values.is_empty());
    }

    #[test]
    fn padded_empty_sigma_has_one_inhabitant() {
        let t = Ty::sum(Ty::Unit, Ty::sigma(Ty::Empty, Ty::Unit));
        let e = enumerate(&t, 3).unwrap();
        assert_eq!(e.values, vec![Value::inl(Value::Elt)]);
        assert!(!e.partial);
    }

    #[test]
    fn fin_enumerates_indices() {
        let e = enumerate(&Ty::Fin(3), 0).unwrap();
        assert_eq!(e.values, vec![Value::Fin(0), Value::Fin(1), Value::Fin(2)]);
    }

    #[test]
    fn nat_is_truncated_and_flagged() {
        let e = enumerate(&Ty::Nat, 4).unwrap();
        assert_eq!(e.values.len(), 5);
        assert!(e.partial);
    }

    #[test]
    fn function_space_over_nat_is_rejected() {
        let err = enumerate(&Ty::fun(Ty::Nat, Ty::Unit), 2).unwrap_err();
        assert!(matches!(err, KernelError::NotEnumerable(_)));
    }

    #[test]
    fn dependent_sigma_counts_pointwise() {
        // (Sigma x:Fin 3) Holds(x <= 1) has exactly two inhabitants.
        let t = Ty::sigma(Ty::Fin(3), Ty::holds(Term::le(Term::Var(0), Term::Fin(1))));
        assert_eq!(enumerate(&t, 0).unwrap().values.len(), 2);
        assert_eq!(cardinality(&t), Some(2));
    }

    #[test]
    fn check_value_examples() {
        assert!(check_value(&Value::Elt, &Ty::Unit));
        assert!(check_value(
            &Value::inl(Value::Elt),
            &Ty::sum(Ty::Unit, Ty::Empty)
        ));
        let t = Value::pair(
            Value::Nat(0),
            Value::pair(Value::Nat(1), Value::pair(Value::Elt, Value::Elt)),
        );
        let ty = Ty::prod(Ty::Nat, Ty::prod(Ty::Nat, Ty::prod(Ty::Unit, Ty::Unit)));
        assert!(check_value(&t, &ty));
        assert!(!check_value(&Value::Fin(3), &Ty::Fin(3)));
        assert!(!check_value(&Value::Elt, &Ty::holds(Term::Bool(false))));
    }

    #[test]
    fn closures_checked_at_every_point() {
        let id = crate::kernel::eval::closure(Term::Var(0));
        assert!(check_value(&id, &Ty::fun(Ty::Fin(2), Ty::Fin(2))));
        assert!(!check_value(&id, &Ty::fun(Ty::Fin(3), Ty::Fin(2))));
        let r = check_value_bounded(&id, &Ty::fun(Ty::Nat, Ty::Nat), Some(3));
        assert!(r.valid && r.shallow);
    }
}
