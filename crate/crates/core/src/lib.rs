//! A small proof-checking kernel for Martin-Löf type theory with cumulative
//! universes, identity types with unbased path induction, and axioms that
//! stay neutral (univalence, function extensionality).
//!
//! Pipeline: [`parse`] to surface syntax, [`resolve`] to de Bruijn terms,
//! [`check`] bidirectionally, with [`eval`] and [`conv`] doing
//! normalization by evaluation and type-directed conversion.

pub mod check;
pub mod conv;
pub mod driver;
pub mod eval;
pub mod parse;
pub mod print;
pub mod report;
pub mod resolve;
pub mod syntax;
pub mod value;

pub use check::{AxiomPolicy, Kernel, Options, Status};
pub use syntax::{Diagnostic, Term};
