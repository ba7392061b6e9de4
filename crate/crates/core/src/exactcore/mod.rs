//! Exact scalar, polynomial and linear-algebra substrate.
//!
//! Everything here is computed over the Gaussian rationals ℚ(i); floating
//! point appears only in explicit conversion helpers.

mod laurent;
mod matrix;
mod poly;
mod roots;
mod scalar;

pub use laurent::{winding, LaurentPoly};
pub use matrix::{
    linear_data, reduced_row_basis, reduced_span, subspace_contained, subspace_dims, unit_vector,
    ExactMatrix, ExactVector, LinearData, SubspaceDims,
};
pub use poly::Poly;
pub use roots::{circle_roots_exist, schur_cohn_count};
pub use scalar::GaussianRational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("the zero polynomial has no finite root count")]
    ZeroPolynomial,
    #[error("polynomial has a root on the unit circle")]
    RootOnCircle,
    #[error("symbol vanishes on the unit circle")]
    SymbolVanishesOnCircle,
    #[error("symbol is identically zero")]
    ZeroSymbol,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid rational literal {0:?}")]
    BadLiteral(String),
    #[error("Schur-Cohn reduction stayed degenerate after every Möbius retry")]
    DegenerateSchurCohn,
}
