//! Syntax of small types and terms.
//!
//! Binders use de Bruijn indices. A `Pi`/`Sigma` codomain, a `Lam` body and
//! each `Case` branch bind one variable; the `Rec` motive binds one and the
//! `Rec` step binds two (`Var(1)` is the predecessor, `Var(0)` the
//! accumulator).

use std::cell::Cell;
use std::sync::Arc;

use super::value::Value;
use crate::prop::Prop;
use crate::realisability::Variant;

/// Small types: the image of the Tp / Cr / Cr' translations.
#[derive(Clone, Debug, PartialEq)]
pub enum Ty {
    Empty,
    Unit,
    Nat,
    Bool,
    Fin(u32),
    Sum(Arc<Ty>, Arc<Ty>),
    Prod(Arc<Ty>, Arc<Ty>),
    Fun(Arc<Ty>, Arc<Ty>),
    /// Dependent function type; the codomain binds the argument.
    Pi(Arc<Ty>, Arc<Ty>),
    /// Dependent pair type; the second component's type binds the first.
    Sigma(Arc<Ty>, Arc<Ty>),
    /// `Unit` when the condition evaluates to `true`, `Empty` otherwise.
    Holds(Arc<Term>),
    /// The realisability predicate as a deferred small type. It is unfolded
    /// one clause at a time once the realiser term is closed.
    Mr {
        prop: Arc<Prop>,
        realiser: Arc<Term>,
        variant: Variant,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(usize),
    Lam(Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    Inl(Arc<Term>),
    Inr(Arc<Term>),
    Case(Arc<Term>, Arc<Term>, Arc<Term>),
    Elt,
    /// Numeral literal; `Nat(0)` is `zero`.
    Nat(u64),
    Succ(Arc<Term>),
    Add(Arc<Term>, Arc<Term>),
    Rec {
        motive: Arc<Ty>,
        scrutinee: Arc<Term>,
        base: Arc<Term>,
        step: Arc<Term>,
    },
    Fin(u32),
    Bool(bool),
    Eq(Arc<Term>, Arc<Term>),
    Le(Arc<Term>, Arc<Term>),
    Not(Arc<Term>),
    And(Arc<Term>, Arc<Term>),
    Or(Arc<Term>, Arc<Term>),
    /// Eliminator for `Empty`.
    Absurd(Arc<Term>),
    /// An already computed value embedded as a constant.
    Val(Value),
}

/// Capture-avoiding traversal of free variables.
///
/// `map_free(f)` replaces every free variable with relative index `i` by
/// `f(i)`, where `f(i)` is a term in the context outside all binders of
/// `self`; results are shifted under binders automatically.
pub trait Binders: Sized {
    fn map_free_at(&self, depth: usize, f: &dyn Fn(usize) -> Term) -> Self;

    fn map_free(&self, f: &dyn Fn(usize) -> Term) -> Self {
        self.map_free_at(0, f)
    }

    /// Shift every free variable up by `by`.
    fn shift(&self, by: usize) -> Self {
        if by == 0 {
            return self.map_free(&|i| Term::Var(i));
        }
        self.map_free(&|i| Term::Var(i + by))
    }

    /// Shift free variables at or above `cutoff` up by `by`.
    fn shift_from(&self, cutoff: usize, by: usize) -> Self {
        self.map_free(&|i| {
            if i < cutoff {
                Term::Var(i)
            } else {
                Term::Var(i + by)
            }
        })
    }

    /// Substitute `arg` for the innermost free variable (index 0).
    fn instantiate(&self, arg: &Term) -> Self {
        self.map_free(&|i| {
            if i == 0 {
                arg.clone()
            } else {
                Term::Var(i - 1)
            }
        })
    }

    /// Substitute a closed value for the innermost free variable.
    fn instantiate_value(&self, v: &Value) -> Self {
        self.instantiate(&Term::quote(v))
    }

    /// Remove the innermost free variable, failing if it occurs.
    fn strengthen(&self) -> Option<Self> {
        let hit = Cell::new(false);
        let out = self.map_free(&|i| {
            if i == 0 {
                hit.set(true);
                Term::Var(0)
            } else {
                Term::Var(i - 1)
            }
        });
        if hit.get() {
            None
        } else {
            Some(out)
        }
    }

    /// Close all free variables with values; `env[0]` is the innermost.
    fn close_with(&self, env: &[Value]) -> Self {
        self.map_free(&|i| match env.get(i) {
            Some(v) => Term::quote(v),
            None => Term::Var(i - env.len()),
        })
    }

    fn is_closed(&self) -> bool {
        let hit = Cell::new(false);
        self.map_free(&|i| {
            hit.set(true);
            Term::Var(i)
        });
        !hit.get()
    }
}

fn a<T>(x: T) -> Arc<T> {
    Arc::new(x)
}

impl Binders for Term {
    fn map_free_at(&self, depth: usize, f: &dyn Fn(usize) -> Term) -> Term {
        use Term::*;
        let go = |t: &Arc<Term>, d: usize| a(t.map_free_at(d, f));
        match self {
            Var(i) if *i < depth => Var(*i),
            Var(i) => {
                let t = f(*i - depth);
                if depth == 0 {
                    t
                } else {
                    t.shift(depth)
                }
            }
            Lam(b) => Lam(go(b, depth + 1)),
            App(x, y) => App(go(x, depth), go(y, depth)),
            Pair(x, y) => Pair(go(x, depth), go(y, depth)),
            Fst(x) => Fst(go(x, depth)),
            Snd(x) => Snd(go(x, depth)),
            Inl(x) => Inl(go(x, depth)),
            Inr(x) => Inr(go(x, depth)),
            Case(s, l, r) => Case(go(s, depth), go(l, depth + 1), go(r, depth + 1)),
            Succ(x) => Succ(go(x, depth)),
            Add(x, y) => Add(go(x, depth), go(y, depth)),
            Rec {
                motive,
                scrutinee,
                base,
                step,
            } => Rec {
                motive: a(motive.map_free_at(depth + 1, f)),
                scrutinee: go(scrutinee, depth),
                base: go(base, depth),
                step: go(step, depth + 2),
            },
            Eq(x, y) => Eq(go(x, depth), go(y, depth)),
            Le(x, y) => Le(go(x, depth), go(y, depth)),
            Not(x) => Not(go(x, depth)),
            And(x, y) => And(go(x, depth), go(y, depth)),
            Or(x, y) => Or(go(x, depth), go(y, depth)),
            Absurd(x) => Absurd(go(x, depth)),
            Elt | Nat(_) | Fin(_) | Bool(_) | Val(_) => self.clone(),
        }
    }
}

impl Binders for Ty {
    fn map_free_at(&self, depth: usize, f: &dyn Fn(usize) -> Term) -> Ty {
        use Ty::*;
        let go = |t: &Arc<Ty>, d: usize| a(t.map_free_at(d, f));
        match self {
            Empty | Unit | Nat | Bool | Fin(_) => self.clone(),
            Sum(x, y) => Sum(go(x, depth), go(y, depth)),
            Prod(x, y) => Prod(go(x, depth), go(y, depth)),
            Fun(x, y) => Fun(go(x, depth), go(y, depth)),
            Pi(x, y) => Pi(go(x, depth), go(y, depth + 1)),
            Sigma(x, y) => Sigma(go(x, depth), go(y, depth + 1)),
            Holds(c) => Holds(a(c.map_free_at(depth, f))),
            Mr {
                prop,
                realiser,
                variant,
            } => Mr {
                prop: a(prop.map_free_at(depth, f)),
                realiser: a(realiser.map_free_at(depth, f)),
                variant: *variant,
            },
        }
    }
}

impl Term {
    pub fn lam(body: Term) -> Term {
        Term::Lam(a(body))
    }
    pub fn app(f: Term, x: Term) -> Term {
        Term::App(a(f), a(x))
    }
    pub fn pair(x: Term, y: Term) -> Term {
        Term::Pair(a(x), a(y))
    }
    pub fn fst(x: Term) -> Term {
        Term::Fst(a(x))
    }
    pub fn snd(x: Term) -> Term {
        Term::Snd(a(x))
    }
    pub fn inl(x: Term) -> Term {
        Term::Inl(a(x))
    }
    pub fn inr(x: Term) -> Term {
        Term::Inr(a(x))
    }
    pub fn case(s: Term, l: Term, r: Term) -> Term {
        Term::Case(a(s), a(l), a(r))
    }
    pub fn succ(x: Term) -> Term {
        Term::Succ(a(x))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn add(x: Term, y: Term) -> Term {
        Term::Add(a(x), a(y))
    }
    pub fn eq(x: Term, y: Term) -> Term {
        Term::Eq(a(x), a(y))
    }
    pub fn le(x: Term, y: Term) -> Term {
        Term::Le(a(x), a(y))
    }
    pub fn absurd(x: Term) -> Term {
        Term::Absurd(a(x))
    }
    pub fn rec(motive: Ty, scrutinee: Term, base: Term, step: Term) -> Term {
        Term::Rec {
            motive: a(motive),
            scrutinee: a(scrutinee),
            base: a(base),
            step: a(step),
        }
    }

    /// `n` nested lambdas around `body`.
    pub fn lams(n: usize, body: Term) -> Term {
        (0..n).fold(body, |b, _| Term::lam(b))
    }

    /// Turn a value back into syntax. First-order values become literals,
    /// anything functional is embedded with `Val`.
    pub fn quote(v: &Value) -> Term {
        match v {
            Value::Elt => Term::Elt,
            Value::Nat(n) => Term::Nat(*n),
            Value::Fin(i) => Term::Fin(*i),
            Value::Bool(b) => Term::Bool(*b),
            Value::Pair(x, y) => Term::pair(Term::quote(x), Term::quote(y)),
            Value::Inl(x) => Term::inl(Term::quote(x)),
            Value::Inr(x) => Term::inr(Term::quote(x)),
            _ => Term::Val(v.clone()),
        }
    }

    /// Number of nodes, used to bound generated test programs.
    pub fn size(&self) -> usize {
        use Term::*;
        1 + match self {
            Lam(x) | Fst(x) | Snd(x) | Inl(x) | Inr(x) | Succ(x) | Not(x) | Absurd(x) => x.size(),
            App(x, y) | Pair(x, y) | Add(x, y) | Eq(x, y) | Le(x, y) | And(x, y) | Or(x, y) => {
                x.size() + y.size()
            }
            Case(s, l, r) => s.size() + l.size() + r.size(),
            Rec {
                scrutinee,
                base,
                step,
                ..
            } => scrutinee.size() + base.size() + step.size(),
            Var(_) | Elt | Nat(_) | Fin(_) | Bool(_) | Val(_) => 0,
        }
    }

    /// Count `Rec` nodes, including those nested under binders.
    pub fn count_rec(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, Term::Rec { .. }) {
                n += 1;
            }
        });
        n
    }

    /// Pre-order traversal of subterms.
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        use Term::*;
        f(self);
        match self {
            Lam(x) | Fst(x) | Snd(x) | Inl(x) | Inr(x) | Succ(x) | Not(x) | Absurd(x) => x.visit(f),
            App(x, y) | Pair(x, y) | Add(x, y) | Eq(x, y) | Le(x, y) | And(x, y) | Or(x, y) => {
                x.visit(f);
                y.visit(f);
            }
            Case(s, l, r) => {
                s.visit(f);
                l.visit(f);
                r.visit(f);
            }
            Rec {
                scrutinee,
                base,
                step,
                ..
            } => {
                scrutinee.visit(f);
                base.visit(f);
                step.visit(f);
            }
            Var(_) | Elt | Nat(_) | Fin(_) | Bool(_) | Val(_) => {}
        }
    }
}

impl Ty {
    pub fn sum(x: Ty, y: Ty) -> Ty {
        Ty::Sum(a(x), a(y))
    }
    pub fn prod(x: Ty, y: Ty) -> Ty {
        Ty::Prod(a(x), a(y))
    }
    pub fn fun(x: Ty, y: Ty) -> Ty {
        Ty::Fun(a(x), a(y))
    }
    pub fn pi(x: Ty, y: Ty) -> Ty {
        Ty::Pi(a(x), a(y))
    }
    pub fn sigma(x: Ty, y: Ty) -> Ty {
        Ty::Sigma(a(x), a(y))
    }
    pub fn holds(c: Term) -> Ty {
        Ty::Holds(a(c))
    }

    /// Codomain of a `Fun`/`Pi` at the given argument, or second component
    /// type of a `Prod`/`Sigma` at the given first component.
    pub fn family_at(&self, arg: &Value) -> Option<Ty> {
        match self {
            Ty::Fun(_, c) | Ty::Prod(_, c) => Some((**c).clone()),
            Ty::Pi(_, c) | Ty::Sigma(_, c) => Some(c.instantiate_value(arg)),
            _ => None,
        }
    }

    /// Replace dependent binders whose body ignores the bound variable by
    /// the non-dependent constructors. Purely cosmetic.
    pub fn simplify(&self) -> Ty {
        match self {
            Ty::Pi(d, c) => match c.strengthen() {
                Some(c) => Ty::fun(d.simplify(), c.simplify()),
                None => Ty::pi(d.simplify(), c.simplify()),
            },
            Ty::Sigma(d, c) => match c.strengthen() {
                Some(c) => Ty::prod(d.simplify(), c.simplify()),
                None => Ty::sigma(d.simplify(), c.simplify()),
            },
            Ty::Sum(x, y) => Ty::sum(x.simplify(), y.simplify()),
            Ty::Prod(x, y) => Ty::prod(x.simplify(), y.simplify()),
            Ty::Fun(x, y) => Ty::fun(x.simplify(), y.simplify()),
            _ => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instantiate_under_binder_shifts_argument() {
        // \y. x y   with x := Var(3) becomes \y. Var(4) y
        let body = Term::lam(Term::app(Term::Var(1), Term::Var(0)));
        let got = body.instantiate(&Term::Var(3));
        assert_eq!(got, Term::lam(Term::app(Term::Var(4), Term::Var(0))));
    }

    #[test]
    fn strengthen_detects_occurrence() {
        assert!(Term::Var(0).strengthen().is_none());
        assert_eq!(Term::Var(2).strengthen(), Some(Term::Var(1)));
        let t = Term::lam(Term::Var(0));
        assert_eq!(t.strengthen(), Some(t.clone()));
    }

    #[test]
    fn shift_from_skips_low_indices() {
        let t = Term::pair(Term::Var(0), Term::Var(1));
        assert_eq!(t.shift_from(1, 1), Term::pair(Term::Var(0), Term::Var(2)));
    }

    #[test]
    fn simplify_turns_constant_families_non_dependent() {
        let t = Ty::sigma(Ty::Nat, Ty::sigma(Ty::Nat, Ty::Unit));
        assert_eq!(t.simplify(), Ty::prod(Ty::Nat, Ty::prod(Ty::Nat, Ty::Unit)));
        let dep = Ty::pi(Ty::Fin(2), Ty::holds(Term::eq(Term::Var(0), Term::Fin(0))));
        assert_eq!(dep.simplify(), dep);
    }
}
