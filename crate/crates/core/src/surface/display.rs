//! Human-readable propositions: `∀x:Nat. ∃y:Nat. G(x, y) ∧ ⊥`.
//!
//! Atomic and nullary definitions from a source file are folded back into
//! their names.

use crate::kernel::syntax::{Binders, Term, Ty};
use crate::logic::Sequent;
use crate::prop::Prop;

use super::listing::Listing;
use super::parse::{Definitions, PropDef};
use super::print::binder_name;

/// Prints propositions, folding atomic definitions when given some.
#[derive(Default)]
pub struct PropDisplay<'d> {
    abbreviations: Vec<(&'d str, &'d PropDef)>,
}

impl<'d> PropDisplay<'d> {
    pub fn new(defs: &'d Definitions) -> PropDisplay<'d> {
        let abbreviations = defs
            .prop_order
            .iter()
            .rev()
            .filter_map(|name| {
                let def = defs.props.get(name)?;
                let foldable = def.params.is_empty() || matches!(def.body, Prop::Atom(_));
                foldable.then_some((name.as_str(), def))
            })
            .collect();
        PropDisplay { abbreviations }
    }

    pub fn prop(&self, p: &Prop) -> String {
        self.at(p, 0, 0)
    }

    pub fn sequent(&self, s: &Sequent) -> String {
        format!("{} ⊢ {}", self.prop(&s.antecedent), self.prop(&s.succedent))
    }

    fn at(&self, p: &Prop, depth: usize, need: u8) -> String {
        if let Some((name, _)) = self
            .abbreviations
            .iter()
            .find(|(_, def)| def.params.is_empty() && def.body == *p)
        {
            return name.to_string();
        }
        let (s, own) = match p {
            Prop::Absurd => ("⊥".to_string(), 4),
            Prop::Atom(ty) => (self.atom(ty, depth), 4),
            Prop::And(a, b) => (
                format!("{} ∧ {}", self.at(a, depth, 4), self.at(b, depth, 3)),
                3,
            ),
            Prop::Or(a, b) => (
                format!("{} ∨ {}", self.at(a, depth, 3), self.at(b, depth, 2)),
                2,
            ),
            Prop::Implies(a, b) => (
                format!("{} → {}", self.at(a, depth, 2), self.at(b, depth, 1)),
                1,
            ),
            Prop::Forall(d, b) | Prop::Exists(d, b) => {
                let q = if matches!(p, Prop::Forall(..)) {
                    "∀"
                } else {
                    "∃"
                };
                let d = Listing::at(depth).show_ty(d);
                let x = binder_name(depth);
                (format!("{q}{x}:{d}. {}", self.at(b, depth + 1, 0)), 0)
            }
        };
        if own < need {
            format!("({s})")
        } else {
            s
        }
    }

    fn atom(&self, ty: &Ty, depth: usize) -> String {
        self.folded(ty, depth)
            .unwrap_or_else(|| Listing::at(depth).show_ty(ty))
    }

    /// The atom as an application of definitions: a product whose parts
    /// all fold is shown part by part, `G(s, x) × G(succ s, y)`.
    fn folded(&self, ty: &Ty, depth: usize) -> Option<String> {
        if let Ty::Prod(a, b) = ty {
            if let (Some(a), Some(b)) = (self.folded(a, depth), self.folded(b, depth)) {
                return Some(format!("{a} × {b}"));
            }
        }
        self.abbreviations.iter().find_map(|(name, def)| {
            let Prop::Atom(pat) = &def.body else {
                return None;
            };
            let mut m = Matcher {
                holes: vec![None; def.params.len()],
            };
            if def.params.is_empty() || !m.ty(pat, ty, 0) {
                return None;
            }
            let args: Vec<String> = m
                .holes
                .iter()
                .rev()
                .map(|t| {
                    Listing::at(depth).show_term(t.as_ref().expect("every parameter is bound"))
                })
                .collect();
            Some(format!("{name}({})", args.join(", ")))
        })
    }
}

/// Matches a definition body, open in its parameters, against a type.
struct Matcher {
    /// Hole `i` is the parameter with index `i`, innermost first.
    holes: Vec<Option<Term>>,
}

impl Matcher {
    fn var(&mut self, i: usize, t: &Term, inner: usize) -> bool {
        if i < inner {
            return *t == Term::Var(i);
        }
        let hole = i - inner;
        if hole >= self.holes.len() {
            return false;
        }
        // The argument may only mention the variables outside the body.
        let Some(arg) = (0..inner).try_fold(t.clone(), |t, _| t.strengthen()) else {
            return false;
        };
        match &self.holes[hole] {
            Some(prev) => *prev == arg,
            None => {
                self.holes[hole] = Some(arg);
                true
            }
        }
    }

    fn ty(&mut self, p: &Ty, t: &Ty, inner: usize) -> bool {
        match (p, t) {
            (Ty::Empty, Ty::Empty)
            | (Ty::Unit, Ty::Unit)
            | (Ty::Nat, Ty::Nat)
            | (Ty::Bool, Ty::Bool) => true,
            (Ty::Fin(a), Ty::Fin(b)) => a == b,
            (Ty::Sum(a, b), Ty::Sum(c, d))
            | (Ty::Prod(a, b), Ty::Prod(c, d))
            | (Ty::Fun(a, b), Ty::Fun(c, d)) => self.ty(a, c, inner) && self.ty(b, d, inner),
            (Ty::Pi(a, b), Ty::Pi(c, d)) | (Ty::Sigma(a, b), Ty::Sigma(c, d)) => {
                self.ty(a, c, inner) && self.ty(b, d, inner + 1)
            }
            (Ty::Holds(a), Ty::Holds(b)) => self.term(a, b, inner),
            _ => false,
        }
    }

    fn term(&mut self, p: &Term, t: &Term, inner: usize) -> bool {
        use Term::*;
        match (p, t) {
            (Var(i), _) => self.var(*i, t, inner),
            (Lam(a), Lam(b)) => self.term(a, b, inner + 1),
            (App(a, b), App(c, d))
            | (Pair(a, b), Pair(c, d))
            | (Add(a, b), Add(c, d))
            | (Eq(a, b), Eq(c, d))
            | (Le(a, b), Le(c, d))
            | (And(a, b), And(c, d))
            | (Or(a, b), Or(c, d)) => self.term(a, c, inner) && self.term(b, d, inner),
            (Fst(a), Fst(b))
            | (Snd(a), Snd(b))
            | (Inl(a), Inl(b))
            | (Inr(a), Inr(b))
            | (Succ(a), Succ(b))
            | (Not(a), Not(b))
            | (Absurd(a), Absurd(b)) => self.term(a, b, inner),
            (Case(a, b, c), Case(d, e, f)) => {
                self.term(a, d, inner) && self.term(b, e, inner + 1) && self.term(c, f, inner + 1)
            }
            (
                Rec {
                    motive: m1,
                    scrutinee: s1,
                    base: b1,
                    step: t1,
                },
                Rec {
                    motive: m2,
                    scrutinee: s2,
                    base: b2,
                    step: t2,
                },
            ) => {
                self.ty(m1, m2, inner + 1)
                    && self.term(s1, s2, inner)
                    && self.term(b1, b2, inner)
                    && self.term(t1, t2, inner + 2)
            }
            (Elt, Elt) => true,
            (Nat(a), Nat(b)) => a == b,
            (Fin(a), Fin(b)) => a == b,
            (Bool(a), Bool(b)) => a == b,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse::{parse, parse_prop};

    #[test]
    fn connectives() {
        let p = parse_prop(
            "(forall nat (lam s (imp (and (atom unit) bot) (exists (fin 2) (lam x (atom (holds (= s 1))))))))",
        )
        .unwrap();
        assert_eq!(
            PropDisplay::default().prop(&p),
            "∀s:Nat. Unit ∧ ⊥ → (∃x:Fin 2. Holds(s = succ zero))"
        );
    }

    #[test]
    fn folds_definitions() {
        let src = "(defprop G (m k) (atom (holds (= k (+ m m)))))
                   (defprop Ax (forall nat (lam m (G m (+ m m)))))
                   (defprop Q (x) (exists nat (lam y (and (G x y) Ax))))";
        let file = parse(src).unwrap();
        let q = file.defs.props["Q"].instantiate(&[Term::Nat(3)]);
        assert_eq!(
            PropDisplay::new(&file.defs).prop(&q),
            "∃s:Nat. G(3, s) ∧ Ax"
        );
    }

    #[test]
    fn splits_product_atoms() {
        let src = "(defprop G (m k) (atom (holds (= k (+ m m)))))
                   (defprop C (x k l) (atom (prod (holds (= k (+ x x))) (holds (= l (+ (succ x) (succ x)))))))
                   (defprop D (x k) (atom (prod (holds (= k (+ x x))) (holds (= x k)))))";
        let file = parse(src).unwrap();
        let display = PropDisplay::new(&file.defs);
        let c = file.defs.props["C"].instantiate(&[Term::Nat(1), Term::Nat(2), Term::Nat(4)]);
        assert_eq!(display.prop(&c), "G(succ zero, 2) × G(succ (succ zero), 4)");
        let d = file.defs.props["D"].instantiate(&[Term::Nat(1), Term::Nat(2)]);
        assert_eq!(display.prop(&d), "D(succ zero, 2)");
    }
}
