//! Sequents and proof trees of the infinitary sequent calculus.

use std::fmt;
use std::sync::Arc;

use crate::kernel::syntax::{Term, Ty};
use crate::prop::Prop;

/// `antecedent ⊢ succedent`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequent {
    pub antecedent: Prop,
    pub succedent: Prop,
}

impl Sequent {
    pub fn new(antecedent: Prop, succedent: Prop) -> Sequent {
        Sequent {
            antecedent,
            succedent,
        }
    }

    /// The proposition `antecedent → succedent`.
    pub fn as_implication(&self) -> Prop {
        Prop::implies(self.antecedent.clone(), self.succedent.clone())
    }
}

/// One node per rule. Terms inside rules may mention the variables bound by
/// enclosing `ForallIntro` / `ExistsElim` nodes.
#[derive(Clone, Debug, PartialEq)]
pub enum Proof {
    /// `A ⊢ A`
    Identity(Prop),
    /// From `A ⊢ B` and `B ⊢ C` infer `A ⊢ C`.
    Cut(Arc<Proof>, Arc<Proof>),
    /// `A ⊢ atom(T)` given an inhabitant of `T`.
    InhabitedAtom {
        antecedent: Prop,
        ty: Ty,
        witness: Term,
    },
    /// `A ∧ B ⊢ A`
    AndElimL(Prop, Prop),
    /// `A ∧ B ⊢ B`
    AndElimR(Prop, Prop),
    /// From `C ⊢ A` and `C ⊢ B` infer `C ⊢ A ∧ B`.
    AndIntro(Arc<Proof>, Arc<Proof>),
    /// `⊥ ⊢ atom(T)`
    WeakAbsurd(Ty),
    /// `A ⊢ A ∨ B`
    OrIntroL(Prop, Prop),
    /// `B ⊢ A ∨ B`
    OrIntroR(Prop, Prop),
    /// From `A ⊢ C` and `B ⊢ C` infer `A ∨ B ⊢ C`.
    OrElim(Arc<Proof>, Arc<Proof>),
    /// From `A ∧ B ⊢ C` infer `A ⊢ B → C`.
    ImpIntro(Arc<Proof>),
    /// From `A ⊢ B → C` infer `A ∧ B ⊢ C`.
    ImpElim(Arc<Proof>),
    /// From `A ⊢ P(x)` for a fresh `x : S` infer `A ⊢ ∀(S, P)`. The body
    /// binds `x`.
    ForallIntro { domain: Ty, body: Arc<Proof> },
    /// From `A ⊢ ∀(S, P)` infer `A ⊢ P(t)`.
    ForallElim { premise: Arc<Proof>, term: Term },
    /// From `P(x) ⊢ A` for a fresh `x : S` infer `∃(S, P) ⊢ A`. The body
    /// binds `x`.
    ExistsElim { domain: Ty, body: Arc<Proof> },
    /// From `∃(S, P) ⊢ A` infer `P(t) ⊢ A`.
    ExistsInv { premise: Arc<Proof>, term: Term },
    /// `P(t) ⊢ ∃(S, P)`
    ExistsIntro {
        domain: Ty,
        family: Prop,
        term: Term,
    },
    /// `⊥ ⊢ A` for arbitrary `A`.
    FullAbsurd(Prop),
    /// `P(0) ∧ ∀x:Nat (P(x) → P(S x)) ⊢ ∀x:Nat P(x)`. The family binds `x`.
    Induction(Prop),
    /// `∀x:A ∃y:B P(x, y) ⊢ ∃g:A→B ∀x:A P(x, g x)`. The family binds `x`
    /// (index 1) and `y` (index 0).
    Choice {
        domain: Ty,
        codomain: Ty,
        family: Prop,
        default: Option<Term>,
    },
    /// `C ⊢ ∀x̄ (Q → P)` for atomic or absurd `P`, given evidence of the
    /// truth of the conclusion. `prefix[j]` may mention `x₁ … x_j`;
    /// `hypothesis` and `conclusion` are under all of the prefix.
    TrivialTransfer {
        antecedent: Prop,
        prefix: Vec<Ty>,
        hypothesis: Prop,
        conclusion: Prop,
        evidence: Term,
    },
}

impl Proof {
    pub fn cut(p: Proof, q: Proof) -> Proof {
        Proof::Cut(Arc::new(p), Arc::new(q))
    }
    pub fn and_intro(p: Proof, q: Proof) -> Proof {
        Proof::AndIntro(Arc::new(p), Arc::new(q))
    }
    pub fn or_elim(p: Proof, q: Proof) -> Proof {
        Proof::OrElim(Arc::new(p), Arc::new(q))
    }
    pub fn imp_intro(p: Proof) -> Proof {
        Proof::ImpIntro(Arc::new(p))
    }
    pub fn imp_elim(p: Proof) -> Proof {
        Proof::ImpElim(Arc::new(p))
    }
    pub fn forall_intro(domain: Ty, body: Proof) -> Proof {
        Proof::ForallIntro {
            domain,
            body: Arc::new(body),
        }
    }
    pub fn forall_elim(premise: Proof, term: Term) -> Proof {
        Proof::ForallElim {
            premise: Arc::new(premise),
            term,
        }
    }
    pub fn exists_elim(domain: Ty, body: Proof) -> Proof {
        Proof::ExistsElim {
            domain,
            body: Arc::new(body),
        }
    }
    pub fn exists_inv(premise: Proof, term: Term) -> Proof {
        Proof::ExistsInv {
            premise: Arc::new(premise),
            term,
        }
    }
    pub fn exists_intro(domain: Ty, family: Prop, term: Term) -> Proof {
        Proof::ExistsIntro {
            domain,
            family,
            term,
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            Proof::Identity(_) => "id",
            Proof::Cut(..) => "cut",
            Proof::InhabitedAtom { .. } => "inhabited",
            Proof::AndElimL(..) => "and-l",
            Proof::AndElimR(..) => "and-r",
            Proof::AndIntro(..) => "and-i",
            Proof::WeakAbsurd(_) => "weak-absurd",
            Proof::OrIntroL(..) => "or-l",
            Proof::OrIntroR(..) => "or-r",
            Proof::OrElim(..) => "or-e",
            Proof::ImpIntro(_) => "imp-i",
            Proof::ImpElim(_) => "imp-e",
            Proof::ForallIntro { .. } => "forall-i",
            Proof::ForallElim { .. } => "forall-e",
            Proof::ExistsElim { .. } => "exists-e",
            Proof::ExistsInv { .. } => "exists-inv",
            Proof::ExistsIntro { .. } => "exists-i",
            Proof::FullAbsurd(_) => "full-absurd",
            Proof::Induction(_) => "induction",
            Proof::Choice { .. } => "choice",
            Proof::TrivialTransfer { .. } => "transfer",
        }
    }

    pub fn children(&self) -> Vec<&Proof> {
        match self {
            Proof::Cut(p, q) | Proof::AndIntro(p, q) | Proof::OrElim(p, q) => vec![p, q],
            Proof::ImpIntro(p) | Proof::ImpElim(p) => vec![p],
            Proof::ForallIntro { body, .. } | Proof::ExistsElim { body, .. } => vec![body],
            Proof::ForallElim { premise, .. } | Proof::ExistsInv { premise, .. } => vec![premise],
            _ => vec![],
        }
    }

    pub fn uses_full_absurd(&self) -> bool {
        matches!(self, Proof::FullAbsurd(_)) || self.children().iter().any(|c| c.uses_full_absurd())
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ⊢ {}",
            crate::surface::print_prop(&self.antecedent),
            crate::surface::print_prop(&self.succedent)
        )
    }
}
