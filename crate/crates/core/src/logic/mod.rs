//! First-order syntax over relational signatures.
//!
//! Equality is a logical symbol, not a signature relation. Variables live in
//! the closed namespace `x1, x2, ...`.

mod formula;
mod parser;
mod printer;
mod signature;

pub use formula::{BinOp, Formula, Quantifier, Var};
pub use parser::{parse_formula, parse_formula_inferred};
pub use signature::{RelSymbol, Signature};
pub(crate) use signature::parse_decl as parse_decl_token;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("SyntaxError: at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("UnknownSymbol: relation `{0}` is not declared")]
    UnknownSymbol(String),
    #[error("ArityMismatch: `{name}` has arity {expected} but is used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("InvalidSignature: {0}")]
    InvalidSignature(String),
}
