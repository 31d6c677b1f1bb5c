//! Finite relational structures and the semantic engines over them.

mod ef;
mod enumerate;
mod eval;
pub mod io;
mod iso;
mod structure;

pub use ef::{ef_equivalent, EfGame, Move};
pub use enumerate::{enumerate_sentences, SentenceEnumerator};
pub use eval::{evaluate, Assignment};
pub use iso::{are_isomorphic, automorphisms, orbit_count};
pub use structure::FiniteStructure;

use thiserror::Error;

use crate::logic::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("SignatureMismatch: {0}")]
    SignatureMismatch(String),
    #[error("UnboundVariable: {0} has no value in the assignment")]
    UnboundVariable(Var),
    #[error("ElementOutOfRange: element {element} is not below universe size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("TupleArity: `{rel}` expects {expected} entries, got {found}")]
    TupleArity {
        rel: String,
        expected: usize,
        found: usize,
    },
    #[error("UnknownRelation: `{0}`")]
    UnknownRelation(String),
    #[error("EmptyUniverse: the structure has no elements")]
    EmptyUniverse,
    #[error("TooLarge: {0}")]
    TooLarge(String),
}
