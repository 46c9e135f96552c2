//! Concrete syntax: S-expression sources, program listings and display.

pub mod display;
pub mod listing;
pub mod parse;
pub mod print;
pub mod sexp;

use thiserror::Error;

pub use display::PropDisplay;
pub use listing::{parse_listing_ty, parse_program, print_listing_ty, print_program, print_value};
pub use parse::{
    parse, parse_proof, parse_prop, parse_prop_with, parse_term, parse_term_with, parse_ty, Decl,
    Definitions, PropDef, SourceFile,
};
pub use print::{print_proof, print_prop, print_term, print_ty};
pub use sexp::Pos;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{pos}: syntax error: expected {expected}")]
    Syntax { pos: Pos, expected: String },
    #[error("{pos}: unbound name `{name}`")]
    UnboundName { pos: Pos, name: String },
    #[error("{pos}: `{name}` is already defined")]
    DuplicateName { pos: Pos, name: String },
    #[error("{pos}: {reason}")]
    Invalid { pos: Pos, reason: String },
}

impl SurfaceError {
    pub(crate) fn syntax(pos: Pos, expected: &str) -> Self {
        SurfaceError::Syntax {
            pos,
            expected: expected.to_string(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            SurfaceError::Syntax { pos, .. }
            | SurfaceError::UnboundName { pos, .. }
            | SurfaceError::DuplicateName { pos, .. }
            | SurfaceError::Invalid { pos, .. } => *pos,
        }
    }
}
