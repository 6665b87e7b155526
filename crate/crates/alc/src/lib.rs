//! Finite Boolean algebras with operators presented by atom structures:
//! relation, cylindric and quasipolyadic-equality algebras at exhaustively
//! checkable scale, together with the machinery built on top of them —
//! equational axiom suites, representation games on networks, recursive
//! axiom synthesis, graph-based (non-)representability constructions and a
//! bounded-base representation finder.
//!
//! Everything here is finite and deterministic. Elements are atom bit sets,
//! operators are atom-level tables extended completely additively, and all
//! randomised search is seeded.

pub mod algebra;
pub mod cli;
pub mod element;
pub mod error;
pub mod games;
pub mod graphs;
pub mod repsearch;
pub mod structures;
pub mod synth;
pub mod termlang;

pub use algebra::{FiniteAlgebra, OperatorSymbol, Signature};
pub use element::Element;
pub use error::AlcError;
