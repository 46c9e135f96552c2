//! Structural proof checking.

use crate::kernel::enumerate::{check_value_bounded, enum_ty, KernelError};
use crate::kernel::eval::Evaluator;
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::typing::{check_term, Verdict};
use crate::kernel::value::{Env, Value};
use crate::prop::{tp, Prop};

use super::proof::{Proof, Sequent};
use super::LogicError;

pub const DEFAULT_NAT_BOUND: u64 = 8;

/// A side condition `term : ty` that could not be decided symbolically.
#[derive(Clone, Debug)]
struct Obligation {
    rule: &'static str,
    /// Innermost binder first.
    ctx: Vec<Ty>,
    term: Term,
    ty: Ty,
}

/// Proof checker. Side conditions under binders over `Nat` are validated at
/// every point up to `nat_bound`.
#[derive(Clone, Copy, Debug)]
pub struct Checker {
    pub nat_bound: u64,
}

impl Default for Checker {
    fn default() -> Self {
        Checker {
            nat_bound: DEFAULT_NAT_BOUND,
        }
    }
}

pub fn check(p: &Proof) -> Result<Sequent, LogicError> {
    Checker::default().check(p)
}

/// The conclusion of `p` without discharging side conditions.
pub fn conclusion(p: &Proof) -> Result<Sequent, LogicError> {
    conclusion_in(&[], p)
}

pub(crate) fn conclusion_in(ctx: &[Ty], p: &Proof) -> Result<Sequent, LogicError> {
    let checker = Checker::default();
    let mut obligations = None;
    checker.infer(ctx, p, &mut obligations)
}

fn malformed<T>(p: &Proof, reason: impl Into<String>) -> Result<T, LogicError> {
    Err(LogicError::MalformedRule {
        rule: p.rule_name(),
        reason: reason.into(),
    })
}

fn extend(ctx: &[Ty], ty: &Ty) -> Vec<Ty> {
    let mut inner = Vec::with_capacity(ctx.len() + 1);
    inner.push(ty.clone());
    inner.extend_from_slice(ctx);
    inner
}

/// Substitution turning the choice family `P(x, y)` into `P(x, g x)` under
/// the binders `g` (index 1) and `x` (index 0).
pub(crate) fn choice_body(family: &Prop) -> Prop {
    family.map_free(&|i| match i {
        0 => Term::app(Term::Var(1), Term::Var(0)),
        1 => Term::Var(0),
        i => Term::Var(i),
    })
}

/// `∀x̄ (Q → P)` for a transfer rule.
pub(crate) fn transfer_prop(prefix: &[Ty], hypothesis: &Prop, conclusion: &Prop) -> Prop {
    prefix.iter().rev().fold(
        Prop::implies(hypothesis.clone(), conclusion.clone()),
        |body, ty| Prop::forall(ty.clone(), body),
    )
}

impl Checker {
    pub fn new(nat_bound: u64) -> Checker {
        Checker { nat_bound }
    }

    pub fn check(&self, p: &Proof) -> Result<Sequent, LogicError> {
        let mut obligations = Some(Vec::new());
        let seq = self.infer(&[], p, &mut obligations)?;
        for ob in obligations.unwrap_or_default() {
            self.discharge(&ob)?;
        }
        Ok(seq)
    }

    fn side(
        &self,
        ctx: &[Ty],
        p: &Proof,
        term: &Term,
        ty: &Ty,
        obligations: &mut Option<Vec<Obligation>>,
    ) -> Result<(), LogicError> {
        let Some(obligations) = obligations else {
            return Ok(());
        };
        if term.is_closed() && ty.is_closed() {
            let v = Evaluator::new().eval(term, &Env::new()).map_err(|e| {
                LogicError::MalformedRule {
                    rule: p.rule_name(),
                    reason: e.to_string(),
                }
            })?;
            if !check_value_bounded(&v, ty, Some(self.nat_bound)).valid {
                return malformed(p, format!("{v:?} is not an element of the required type"));
            }
            return Ok(());
        }
        match check_term(ctx, term, ty) {
            Verdict::Ok => Ok(()),
            Verdict::Fail(reason) => malformed(p, reason),
            Verdict::Deferred => {
                obligations.push(Obligation {
                    rule: p.rule_name(),
                    ctx: ctx.to_vec(),
                    term: term.clone(),
                    ty: ty.clone(),
                });
                Ok(())
            }
        }
    }

    fn infer(
        &self,
        ctx: &[Ty],
        p: &Proof,
        obligations: &mut Option<Vec<Obligation>>,
    ) -> Result<Sequent, LogicError> {
        Ok(match p {
            Proof::Identity(a) => Sequent::new(a.clone(), a.clone()),
            Proof::Cut(l, r) => {
                let first = self.infer(ctx, l, obligations)?;
                let second = self.infer(ctx, r, obligations)?;
                if first.succedent != second.antecedent {
                    return malformed(p, "the cut formulas differ");
                }
                Sequent::new(first.antecedent, second.succedent)
            }
            Proof::InhabitedAtom {
                antecedent,
                ty,
                witness,
            } => {
                self.side(ctx, p, witness, ty, obligations)?;
                Sequent::new(antecedent.clone(), Prop::atom(ty.clone()))
            }
            Proof::AndElimL(a, b) => Sequent::new(Prop::and(a.clone(), b.clone()), a.clone()),
            Proof::AndElimR(a, b) => Sequent::new(Prop::and(a.clone(), b.clone()), b.clone()),
            Proof::AndIntro(l, r) => {
                let first = self.infer(ctx, l, obligations)?;
                let second = self.infer(ctx, r, obligations)?;
                if first.antecedent != second.antecedent {
                    return malformed(p, "the premises have different antecedents");
                }
                Sequent::new(
                    first.antecedent,
                    Prop::and(first.succedent, second.succedent),
                )
            }
            Proof::WeakAbsurd(ty) => Sequent::new(Prop::Absurd, Prop::atom(ty.clone())),
            Proof::OrIntroL(a, b) => Sequent::new(a.clone(), Prop::or(a.clone(), b.clone())),
            Proof::OrIntroR(a, b) => Sequent::new(b.clone(), Prop::or(a.clone(), b.clone())),
            Proof::OrElim(l, r) => {
                let first = self.infer(ctx, l, obligations)?;
                let second = self.infer(ctx, r, obligations)?;
                if first.succedent != second.succedent {
                    return malformed(p, "the premises have different succedents");
                }
                Sequent::new(
                    Prop::or(first.antecedent, second.antecedent),
                    first.succedent,
                )
            }
            Proof::ImpIntro(q) => {
                let premise = self.infer(ctx, q, obligations)?;
                match premise.antecedent {
                    Prop::And(a, b) => {
                        Sequent::new((*a).clone(), Prop::implies((*b).clone(), premise.succedent))
                    }
                    _ => return malformed(p, "the premise antecedent is not a conjunction"),
                }
            }
            Proof::ImpElim(q) => {
                let premise = self.infer(ctx, q, obligations)?;
                match premise.succedent {
                    Prop::Implies(b, c) => {
                        Sequent::new(Prop::and(premise.antecedent, (*b).clone()), (*c).clone())
                    }
                    _ => return malformed(p, "the premise succedent is not an implication"),
                }
            }
            Proof::ForallIntro { domain, body } => {
                let inner = self.infer(&extend(ctx, domain), body, obligations)?;
                let Some(antecedent) = inner.antecedent.strengthen() else {
                    return malformed(p, "the antecedent depends on the bound variable");
                };
                Sequent::new(antecedent, Prop::forall(domain.clone(), inner.succedent))
            }
            Proof::ForallElim { premise, term } => {
                let seq = self.infer(ctx, premise, obligations)?;
                match seq.succedent {
                    Prop::Forall(dom, body) => {
                        self.side(ctx, p, term, &dom, obligations)?;
                        Sequent::new(seq.antecedent, body.instantiate(term))
                    }
                    _ => return malformed(p, "the premise succedent is not universal"),
                }
            }
            Proof::ExistsElim { domain, body } => {
                let inner = self.infer(&extend(ctx, domain), body, obligations)?;
                let Some(succedent) = inner.succedent.strengthen() else {
                    return malformed(p, "the succedent depends on the bound variable");
                };
                Sequent::new(Prop::exists(domain.clone(), inner.antecedent), succedent)
            }
            Proof::ExistsInv { premise, term } => {
                let seq = self.infer(ctx, premise, obligations)?;
                match seq.antecedent {
                    Prop::Exists(dom, body) => {
                        self.side(ctx, p, term, &dom, obligations)?;
                        Sequent::new(body.instantiate(term), seq.succedent)
                    }
                    _ => return malformed(p, "the premise antecedent is not existential"),
                }
            }
            Proof::ExistsIntro {
                domain,
                family,
                term,
            } => {
                self.side(ctx, p, term, domain, obligations)?;
                Sequent::new(
                    family.instantiate(term),
                    Prop::exists(domain.clone(), family.clone()),
                )
            }
            Proof::FullAbsurd(a) => Sequent::new(Prop::Absurd, a.clone()),
            Proof::Induction(family) => {
                let next = family.map_free(&|i| {
                    if i == 0 {
                        Term::succ(Term::Var(0))
                    } else {
                        Term::Var(i)
                    }
                });
                let step = Prop::forall(Ty::Nat, Prop::implies(family.clone(), next));
                Sequent::new(
                    Prop::and(family.instantiate(&Term::Nat(0)), step),
                    Prop::forall(Ty::Nat, family.clone()),
                )
            }
            Proof::Choice {
                domain,
                codomain,
                family,
                default,
            } => {
                if let Some(b0) = default {
                    self.side(ctx, p, b0, codomain, obligations)?;
                }
                let antecedent = Prop::forall(
                    domain.clone(),
                    Prop::exists(codomain.shift(1), family.clone()),
                );
                let succedent = Prop::exists(
                    Ty::fun(domain.clone(), codomain.clone()),
                    Prop::forall(domain.shift(1), choice_body(family)),
                );
                Sequent::new(antecedent, succedent)
            }
            Proof::TrivialTransfer {
                antecedent,
                prefix,
                hypothesis,
                conclusion,
                evidence,
            } => {
                if !conclusion.is_atomic_or_absurd() {
                    return Err(LogicError::NotAtomicConclusion);
                }
                let prop = transfer_prop(prefix, hypothesis, conclusion);
                self.side(ctx, p, evidence, &tp(&prop), obligations)?;
                Sequent::new(antecedent.clone(), prop)
            }
        })
    }

    /// Validate a deferred side condition at every point of its context.
    fn discharge(&self, ob: &Obligation) -> Result<(), LogicError> {
        for env in self.points(&ob.ctx)? {
            let term = ob.term.close_with(&env);
            let ty = ob.ty.close_with(&env);
            let bad = |reason: String| LogicError::MalformedRule {
                rule: ob.rule,
                reason,
            };
            let v = Evaluator::new()
                .eval(&term, &Env::new())
                .map_err(|e| bad(e.to_string()))?;
            if !check_value_bounded(&v, &ty, Some(self.nat_bound)).valid {
                return Err(bad(format!("side condition fails at {env:?}")));
            }
        }
        Ok(())
    }

    /// Every closing environment (innermost value first) of a context.
    fn points(&self, ctx: &[Ty]) -> Result<Vec<Vec<Value>>, LogicError> {
        let Some((innermost, outer)) = ctx.split_first() else {
            return Ok(vec![Vec::new()]);
        };
        let mut out = Vec::new();
        for env in self.points(outer)? {
            let ty = innermost.close_with(&env);
            let mut partial = false;
            let values = enum_ty(&ty, Some(self.nat_bound), &mut partial).map_err(|e| match e {
                KernelError::NotEnumerable(reason) => LogicError::NonEnumerableDomain(reason),
                e => LogicError::Kernel(e),
            })?;
            for v in values {
                let mut inner = Vec::with_capacity(env.len() + 1);
                inner.push(v);
                inner.extend(env.iter().cloned());
                out.push(inner);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Prop {
        Prop::holds(Term::Bool(true))
    }
    fn b() -> Prop {
        Prop::atom(Ty::Unit)
    }

    #[test]
    fn identity_and_cut() {
        assert_eq!(
            check(&Proof::Identity(a())).unwrap(),
            Sequent::new(a(), a())
        );
        let p = Proof::cut(Proof::AndElimL(a(), b()), Proof::OrIntroL(a(), b()));
        assert_eq!(
            check(&p).unwrap(),
            Sequent::new(Prop::and(a(), b()), Prop::or(a(), b()))
        );
    }

    #[test]
    fn mismatched_rules_are_malformed() {
        let p = Proof::imp_intro(Proof::Identity(a()));
        assert!(matches!(
            check(&p),
            Err(LogicError::MalformedRule { rule: "imp-i", .. })
        ));
        let p = Proof::cut(Proof::Identity(a()), Proof::Identity(b()));
        assert!(matches!(
            check(&p),
            Err(LogicError::MalformedRule { rule: "cut", .. })
        ));
    }

    #[test]
    fn imp_intro_shape() {
        let p = Proof::imp_intro(Proof::AndElimR(a(), b()));
        assert_eq!(
            check(&p).unwrap(),
            Sequent::new(a(), Prop::implies(b(), b()))
        );
    }

    #[test]
    fn inhabited_atom_checks_its_witness() {
        let good = Proof::InhabitedAtom {
            antecedent: a(),
            ty: Ty::Fin(2),
            witness: Term::Fin(1),
        };
        assert!(check(&good).is_ok());
        let bad = Proof::InhabitedAtom {
            antecedent: a(),
            ty: Ty::Empty,
            witness: Term::Elt,
        };
        assert!(check(&bad).is_err());
    }

    #[test]
    fn open_side_conditions_are_checked_pointwise() {
        // forall x : Fin 2. A |- x <= 1, proved by an inhabited atom
        let le = Ty::holds(Term::le(Term::Var(0), Term::Fin(1)));
        let body = Proof::InhabitedAtom {
            antecedent: a(),
            ty: le,
            witness: Term::Elt,
        };
        assert!(check(&Proof::forall_intro(Ty::Fin(2), body)).is_ok());
        let eq = Ty::holds(Term::eq(Term::Var(0), Term::Fin(0)));
        let body = Proof::InhabitedAtom {
            antecedent: a(),
            ty: eq,
            witness: Term::Elt,
        };
        assert!(check(&Proof::forall_intro(Ty::Fin(2), body)).is_err());
    }

    #[test]
    fn nat_side_conditions_are_truncated() {
        let le = Ty::holds(Term::le(Term::Nat(0), Term::Var(0)));
        let body = Proof::InhabitedAtom {
            antecedent: a(),
            ty: le,
            witness: Term::Elt,
        };
        assert!(check(&Proof::forall_intro(Ty::Nat, body)).is_ok());
    }

    #[test]
    fn non_enumerable_domain() {
        let dom = Ty::fun(Ty::Nat, Ty::Nat);
        let cond = Ty::holds(Term::eq(
            Term::app(Term::Var(0), Term::Nat(0)),
            Term::Nat(0),
        ));
        let body = Proof::InhabitedAtom {
            antecedent: a(),
            ty: cond,
            witness: Term::Elt,
        };
        assert!(matches!(
            check(&Proof::forall_intro(dom, body)),
            Err(LogicError::NonEnumerableDomain(_))
        ));
    }

    #[test]
    fn forall_intro_rejects_dependent_antecedent() {
        let dep = Prop::holds(Term::eq(Term::Var(0), Term::Fin(0)));
        let p = Proof::forall_intro(Ty::Fin(2), Proof::Identity(dep));
        assert!(check(&p).is_err());
    }

    #[test]
    fn exists_rules() {
        let fam = Prop::holds(Term::eq(Term::Var(0), Term::Fin(1)));
        let intro = Proof::exists_intro(Ty::Fin(2), fam.clone(), Term::Fin(1));
        let seq = check(&intro).unwrap();
        assert_eq!(seq.succedent, Prop::exists(Ty::Fin(2), fam.clone()));
        let inv = Proof::exists_inv(Proof::Identity(seq.succedent.clone()), Term::Fin(1));
        assert_eq!(check(&inv).unwrap(), seq);
        let elim = Proof::exists_elim(
            Ty::Fin(2),
            Proof::exists_intro(Ty::Fin(2), fam.shift_from(1, 1), Term::Var(0)),
        );
        let seq = check(&elim).unwrap();
        assert_eq!(seq.antecedent, seq.succedent);
    }

    #[test]
    fn induction_and_choice_shapes() {
        let fam = Prop::holds(Term::le(Term::Var(0), Term::Var(0)));
        let seq = check(&Proof::Induction(fam.clone())).unwrap();
        assert_eq!(seq.succedent, Prop::forall(Ty::Nat, fam));
        let p = Prop::holds(Term::eq(Term::Var(1), Term::Var(0)));
        let seq = check(&Proof::Choice {
            domain: Ty::Fin(2),
            codomain: Ty::Fin(2),
            family: p,
            default: Some(Term::Fin(0)),
        })
        .unwrap();
        let expected = Prop::holds(Term::eq(
            Term::Var(0),
            Term::app(Term::Var(1), Term::Var(0)),
        ));
        assert_eq!(
            seq.succedent,
            Prop::exists(
                Ty::fun(Ty::Fin(2), Ty::Fin(2)),
                Prop::forall(Ty::Fin(2), expected)
            )
        );
    }
}
