//! The sequent calculus, its checker and realiser extraction.

pub mod check;
pub mod extract;
pub mod lemmas;
pub mod proof;

use thiserror::Error;

use crate::kernel::enumerate::KernelError;
use crate::kernel::eval::EvalError;
use crate::realisability::RealisabilityError;

pub use check::{check, conclusion, Checker, DEFAULT_NAT_BOUND};
pub use extract::{
    ae_extract, ae_shape, extract, extract_checked, extract_prime, extract_with, translate,
    trivial_assumption, AeExtraction, AePoint, Assumption, ExtractionResult, Mode, Verification,
};
pub use lemmas::{choice_realiser, derive_full_absurd, induction_realiser, trivial_realiser};
pub use proof::{Proof, Sequent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error("malformed {rule} rule: {reason}")]
    MalformedRule { rule: &'static str, reason: String },
    #[error("side condition over a non-enumerable domain: {0}")]
    NonEnumerableDomain(String),
    #[error("the full absurdity rule has no realiser in this variant")]
    UsesFullAbsurd,
    #[error("the padded choice realiser needs a default element")]
    MissingDefault,
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("the extracted program reached an impossible inl branch")]
    InlBranchReached,
    #[error("the conclusion of a transfer must be atomic or absurd")]
    NotAtomicConclusion,
    #[error("quantification over an empty domain")]
    EmptyDomainQuantifier,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Realisability(#[from] RealisabilityError),
}
