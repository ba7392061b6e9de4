//! Exact Fredholm and B-Fredholm index computations.
//!
//! Operators are block-diagonal direct sums of finite matrices and banded
//! Toeplitz operators with finite-rank corner patches, all over the Gaussian
//! rationals. On top of that class the crate computes Fredholm and B-Fredholm
//! indices, the degree of stable iteration, indices of operator families over
//! finite parameter graphs, Weyl/Browder spectral sets for normal diagonal
//! families, and explicit sampled paths between B-Fredholm operators.

pub mod bfredholm;
pub mod doc;
pub mod exactcore;
pub mod family;
pub mod fredholm;
pub mod opmodel;
pub mod pathconnect;
pub mod random;
pub mod weyl;
