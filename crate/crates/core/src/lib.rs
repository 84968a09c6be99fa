//! Stabilizer quantum codes from evaluation codes at the roots of
//! trace-depending polynomials over finite fields.

pub mod arith;
pub mod error;
pub mod evalcode;
pub mod expand;
pub mod field;
pub mod pipeline;
pub mod powersums;
pub mod qadic;
pub mod subfield;
pub mod tracepoly;

pub use error::{Error, Result};
pub use field::linalg::{solve_linear, EchelonBasis, LinearSolution, Matrix};
pub use field::{field_new, field_with_cap, FieldCtx, FieldElement, ModulusSource};
