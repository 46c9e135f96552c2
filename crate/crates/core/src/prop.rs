//! Simple propositions and their translations into small types.

use std::sync::Arc;

use crate::kernel::eval::eval;
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::value::{Env, Value};

/// A simple proposition. Quantifier bodies bind one value variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Prop {
    Atom(Arc<Ty>),
    Absurd,
    And(Arc<Prop>, Arc<Prop>),
    Or(Arc<Prop>, Arc<Prop>),
    Implies(Arc<Prop>, Arc<Prop>),
    Forall(Arc<Ty>, Arc<Prop>),
    Exists(Arc<Ty>, Arc<Prop>),
}

impl Prop {
    pub fn atom(t: Ty) -> Prop {
        Prop::Atom(Arc::new(t))
    }
    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Arc::new(a), Arc::new(b))
    }
    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Arc::new(a), Arc::new(b))
    }
    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Arc::new(a), Arc::new(b))
    }
    pub fn forall(dom: Ty, body: Prop) -> Prop {
        Prop::Forall(Arc::new(dom), Arc::new(body))
    }
    pub fn exists(dom: Ty, body: Prop) -> Prop {
        Prop::Exists(Arc::new(dom), Arc::new(body))
    }

    /// `atom(Holds(cond))`.
    pub fn holds(cond: Term) -> Prop {
        Prop::atom(Ty::holds(cond))
    }

    pub fn depth(&self) -> usize {
        match self {
            Prop::Atom(_) | Prop::Absurd => 0,
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Prop::Forall(_, p) | Prop::Exists(_, p) => 1 + p.depth(),
        }
    }

    pub fn contains_exists(&self) -> bool {
        match self {
            Prop::Atom(_) | Prop::Absurd => false,
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                a.contains_exists() || b.contains_exists()
            }
            Prop::Forall(_, p) => p.contains_exists(),
            Prop::Exists(..) => true,
        }
    }

    pub fn is_atomic_or_absurd(&self) -> bool {
        matches!(self, Prop::Atom(_) | Prop::Absurd)
    }
}

impl Binders for Prop {
    fn map_free_at(&self, depth: usize, f: &dyn Fn(usize) -> Term) -> Prop {
        let go = |p: &Arc<Prop>, d: usize| Arc::new(p.map_free_at(d, f));
        let ty = |t: &Arc<Ty>| Arc::new(t.map_free_at(depth, f));
        match self {
            Prop::Atom(t) => Prop::Atom(ty(t)),
            Prop::Absurd => Prop::Absurd,
            Prop::And(a, b) => Prop::And(go(a, depth), go(b, depth)),
            Prop::Or(a, b) => Prop::Or(go(a, depth), go(b, depth)),
            Prop::Implies(a, b) => Prop::Implies(go(a, depth), go(b, depth)),
            Prop::Forall(d, p) => Prop::Forall(ty(d), go(p, depth + 1)),
            Prop::Exists(d, p) => Prop::Exists(ty(d), go(p, depth + 1)),
        }
    }
}

/// Which translation of the connectives to apply.
#[derive(Clone, Copy)]
enum Translation {
    Truth,
    Crude,
    CrudePrime,
}

fn translate(s: &Prop, how: Translation) -> Ty {
    let go = |p: &Prop| translate(p, how);
    match s {
        Prop::Absurd => match how {
            Translation::Truth => Ty::Empty,
            _ => Ty::Unit,
        },
        Prop::Atom(a) => match how {
            Translation::Truth => (**a).clone(),
            _ => Ty::Unit,
        },
        Prop::And(a, b) => Ty::prod(go(a), go(b)),
        Prop::Or(a, b) => Ty::sum(go(a), go(b)),
        Prop::Implies(a, b) => Ty::fun(go(a), go(b)),
        Prop::Forall(d, p) => Ty::pi((**d).clone(), go(p)),
        Prop::Exists(d, p) => {
            let sigma = Ty::sigma((**d).clone(), go(p));
            match how {
                Translation::CrudePrime => Ty::sum(Ty::Unit, sigma),
                _ => sigma,
            }
        }
    }
}

/// Propositions as types.
pub fn tp(s: &Prop) -> Ty {
    translate(s, Translation::Truth)
}

/// Crude type: atoms and absurdity become `Unit`.
pub fn cr(s: &Prop) -> Ty {
    translate(s, Translation::Crude)
}

/// Crude type with existentials padded by a `Unit` summand, so it is always
/// inhabited.
pub fn cr_prime(s: &Prop) -> Ty {
    translate(s, Translation::CrudePrime)
}

/// Closed term denoting the canonical element of `cr_prime(s)`.
///
/// The term does not depend on the value variables of `s`: only the shape of
/// the proposition matters.
pub fn element_term(s: &Prop) -> Term {
    match s {
        Prop::Atom(_) | Prop::Absurd => Term::Elt,
        Prop::And(a, b) => Term::pair(element_term(a), element_term(b)),
        Prop::Or(a, _) => Term::inl(element_term(a)),
        Prop::Implies(_, b) => Term::lam(element_term(b)),
        Prop::Forall(_, p) => Term::lam(element_term(p)),
        Prop::Exists(..) => Term::inl(Term::Elt),
    }
}

/// The canonical element of `cr_prime(s)`.
pub fn element(s: &Prop) -> Value {
    eval(&element_term(s), &Env::new()).expect("element terms are closed and total")
}
