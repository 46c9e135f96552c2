//! Induction, choice and transfer realisers, and the derivation of full
//! absurdity from the weak axiom.

use crate::kernel::enumerate::{cardinality, check_value};
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::value::Value;
use crate::prop::Prop;
use crate::realisability::{decide_inhabited, Variant};

use super::extract::{extract_with, ExtractionResult};
use super::proof::Proof;
use super::LogicError;

/// Realiser of `P(0) ∧ ∀x (P(x) → P(S x)) ⊢ ∀x P(x)` by primitive recursion.
pub fn induction_realiser(family: &Prop, variant: Variant) -> Result<ExtractionResult, LogicError> {
    extract_with(&Proof::Induction(family.clone()), variant)
}

/// Realiser of `∀x:A ∃y:B P(x, y) ⊢ ∃g:A→B ∀x:A P(x, g x)`. The padded
/// variant needs a default element of `B`.
pub fn choice_realiser(
    domain: &Ty,
    codomain: &Ty,
    family: &Prop,
    default: Option<&Value>,
    variant: Variant,
) -> Result<ExtractionResult, LogicError> {
    if let Some(b0) = default {
        if !check_value(b0, codomain) {
            return Err(LogicError::MalformedRule {
                rule: "choice",
                reason: format!("{b0:?} is not an element of the codomain"),
            });
        }
    }
    if variant == Variant::MrPrime && default.is_none() {
        return Err(LogicError::MissingDefault);
    }
    let proof = Proof::Choice {
        domain: domain.clone(),
        codomain: codomain.clone(),
        family: family.clone(),
        default: default.map(Term::quote),
    };
    extract_with(&proof, variant)
}

/// Realiser of `⊤ ⊢ ∀x̄ (Q → P)` for atomic or absurd `P`, given evidence of
/// the truth of the proposition. Applied to `e` it is `λx̄.λr.e`.
pub fn trivial_realiser(
    prefix: &[Ty],
    hypothesis: &Prop,
    conclusion: &Prop,
    truth_evidence: &Value,
    variant: Variant,
) -> Result<ExtractionResult, LogicError> {
    if !conclusion.is_atomic_or_absurd() {
        return Err(LogicError::NotAtomicConclusion);
    }
    let proof = Proof::TrivialTransfer {
        antecedent: Prop::atom(Ty::Unit),
        prefix: prefix.to_vec(),
        hypothesis: hypothesis.clone(),
        conclusion: conclusion.clone(),
        evidence: Term::quote(truth_evidence),
    };
    extract_with(&proof, variant)
}

/// A proof of `⊥ ⊢ A` that only uses absurdity at atoms.
pub fn derive_full_absurd(a: &Prop) -> Result<Proof, LogicError> {
    reject_empty_domains(a)?;
    derive(a)
}

fn reject_empty_domains(a: &Prop) -> Result<(), LogicError> {
    match a {
        Prop::Atom(_) | Prop::Absurd => Ok(()),
        Prop::And(x, y) | Prop::Or(x, y) | Prop::Implies(x, y) => {
            reject_empty_domains(x).and(reject_empty_domains(y))
        }
        Prop::Forall(d, p) | Prop::Exists(d, p) => {
            if cardinality(d) == Some(0) {
                return Err(LogicError::EmptyDomainQuantifier);
            }
            reject_empty_domains(p)
        }
    }
}

fn derive(a: &Prop) -> Result<Proof, LogicError> {
    Ok(match a {
        Prop::Absurd => Proof::Identity(Prop::Absurd),
        Prop::Atom(t) => Proof::WeakAbsurd((**t).clone()),
        Prop::And(x, y) => Proof::and_intro(derive(x)?, derive(y)?),
        Prop::Or(x, y) => Proof::cut(derive(x)?, Proof::OrIntroL((**x).clone(), (**y).clone())),
        Prop::Implies(x, y) => Proof::imp_intro(Proof::cut(
            Proof::AndElimL(Prop::Absurd, (**x).clone()),
            derive(y)?,
        )),
        Prop::Forall(d, p) => Proof::forall_intro((**d).clone(), derive(p)?),
        Prop::Exists(d, p) => {
            if !d.is_closed() {
                return Err(LogicError::WrongShape(
                    "existential domain depends on a bound variable".into(),
                ));
            }
            let t = decide_inhabited(d, 0)?.ok_or(LogicError::EmptyDomainQuantifier)?;
            let t = Term::quote(&t);
            Proof::cut(
                derive(&p.instantiate(&t))?,
                Proof::exists_intro((**d).clone(), (**p).clone(), t),
            )
        }
    })
}
