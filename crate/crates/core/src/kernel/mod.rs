//! The finitary core: small types, terms, values, evaluation, enumeration
//! and normalisation.

pub mod enumerate;
pub mod eval;
pub mod nbe;
pub mod syntax;
pub mod typing;
pub mod value;

pub use enumerate::{
    cardinality, check_value, check_value_bounded, enumerate, CheckReport, Enumeration, KernelError,
};
pub use eval::{eval, eval_counted, EvalError, Evaluator};
pub use nbe::{normalise, NormaliseError};
pub use syntax::{Binders, Term, Ty};
pub use value::{Env, Value};
