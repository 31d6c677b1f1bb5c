//! A finite-model-theory workbench.
//!
//! The crate builds P-combinations and E-combinations of finite relational
//! structures, relativizes first-order formulas to equivalence classes,
//! searches for separating sentences with Ehrenfeucht–Fraïssé games, and
//! evaluates the e-spectrum closed forms next to brute-force oracles.
//!
//! Modules, bottom-up:
//!
//! * [`logic`]: signatures, the formula AST, parser and printer.
//! * [`model`]: finite structures, evaluation, isomorphism, orbits, EF games,
//!   sentence enumeration and the structure file format.
//! * [`combine`]: families, P/E-combinations, restrictions, relativization.
//! * [`separate`]: Scott sentences, separating certificates, e-separating sets.
//! * [`spectra`]: extended cardinals, closed forms, oracles, family generators.
//! * [`selftest`]: the closed-form versus oracle table used by the CLI.

pub mod combine;
pub mod logic;
pub mod model;
pub mod random;
pub mod selftest;
pub mod separate;
pub mod spectra;

pub use combine::{CombinedStructure, FamilySpec};
pub use logic::{Formula, Signature, Var};
pub use model::FiniteStructure;
pub use spectra::ExtCardinal;
