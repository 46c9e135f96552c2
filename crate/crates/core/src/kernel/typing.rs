//! Side-condition checking `t : S` for possibly open terms.
//!
//! This is not a full type checker: it decides the easy syntactic cases and
//! defers the rest (for example membership in `Holds` of an open condition)
//! to pointwise checking after instantiation.

use super::enumerate::check_value;
use super::eval::Evaluator;
use super::syntax::{Binders, Term, Ty};
use super::value::Env;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Ok,
    Fail(String),
    /// Cannot be decided until free variables are instantiated.
    Deferred,
}

/// `ctx[0]` is the type of `Var(0)`, expressed in the context outside it.
pub fn check_term(ctx: &[Ty], t: &Term, ty: &Ty) -> Verdict {
    if t.is_closed() && ty.is_closed() {
        return match Evaluator::new().eval(t, &Env::new()) {
            Ok(v) if check_value(&v, ty) => Verdict::Ok,
            Ok(v) => Verdict::Fail(format!("{v:?} is not an element of {ty:?}")),
            Err(e) => Verdict::Fail(e.to_string()),
        };
    }
    match (t, ty) {
        (Term::Nat(_), Ty::Nat) | (Term::Elt, Ty::Unit) | (Term::Bool(_), Ty::Bool) => Verdict::Ok,
        (Term::Fin(i), Ty::Fin(n)) if i < n => Verdict::Ok,
        (Term::Succ(x), Ty::Nat) => check_term(ctx, x, &Ty::Nat),
        (Term::Add(x, y), Ty::Nat) => both(check_term(ctx, x, &Ty::Nat), || {
            check_term(ctx, y, &Ty::Nat)
        }),
        (Term::Pair(x, y), Ty::Prod(d, c)) => both(check_term(ctx, x, d), || check_term(ctx, y, c)),
        (Term::Pair(x, y), Ty::Sigma(d, c)) => both(check_term(ctx, x, d), || {
            check_term(ctx, y, &c.instantiate(x))
        }),
        (Term::Inl(x), Ty::Sum(l, _)) => check_term(ctx, x, l),
        (Term::Inr(x), Ty::Sum(_, r)) => check_term(ctx, x, r),
        (Term::Lam(b), Ty::Fun(d, c)) => {
            let inner = extend(ctx, d);
            check_term(&inner, b, &c.shift(1))
        }
        (Term::Lam(b), Ty::Pi(d, c)) => {
            let inner = extend(ctx, d);
            check_term(&inner, b, c)
        }
        (Term::Elt, Ty::Holds(_)) => Verdict::Deferred,
        (Term::Val(_), _) => Verdict::Deferred,
        _ => match infer(ctx, t) {
            Some(found) if &found == ty => Verdict::Ok,
            Some(found) if found.is_closed() && ty.is_closed() => {
                Verdict::Fail(format!("expected {ty:?}, found {found:?}"))
            }
            _ => Verdict::Deferred,
        },
    }
}

fn both(first: Verdict, second: impl FnOnce() -> Verdict) -> Verdict {
    match first {
        Verdict::Ok => second(),
        Verdict::Deferred => match second() {
            Verdict::Fail(e) => Verdict::Fail(e),
            _ => Verdict::Deferred,
        },
        fail => fail,
    }
}

fn extend(ctx: &[Ty], ty: &Ty) -> Vec<Ty> {
    let mut inner = Vec::with_capacity(ctx.len() + 1);
    inner.push(ty.clone());
    inner.extend_from_slice(ctx);
    inner
}

pub fn infer(ctx: &[Ty], t: &Term) -> Option<Ty> {
    match t {
        Term::Var(i) => ctx.get(*i).map(|ty| ty.shift(i + 1)),
        Term::Nat(_) | Term::Succ(_) | Term::Add(..) => Some(Ty::Nat),
        Term::Bool(_)
        | Term::Eq(..)
        | Term::Le(..)
        | Term::Not(_)
        | Term::And(..)
        | Term::Or(..) => Some(Ty::Bool),
        Term::Elt => Some(Ty::Unit),
        Term::App(f, x) => match infer(ctx, f)? {
            Ty::Fun(_, c) => Some((*c).clone()),
            Ty::Pi(_, c) => Some(c.instantiate(x)),
            _ => None,
        },
        Term::Fst(p) => match infer(ctx, p)? {
            Ty::Prod(d, _) | Ty::Sigma(d, _) => Some((*d).clone()),
            _ => None,
        },
        Term::Snd(p) => match infer(ctx, p)? {
            Ty::Prod(_, c) => Some((*c).clone()),
            Ty::Sigma(_, c) => Some(c.instantiate(&Term::fst((**p).clone()))),
            _ => None,
        },
        Term::Rec {
            motive, scrutinee, ..
        } => Some(motive.instantiate(scrutinee)),
        _ => None,
    }
}
