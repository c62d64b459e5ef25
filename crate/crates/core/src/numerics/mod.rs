//! Dense linear-algebra kernels: SVD, general eigendecomposition, and the
//! vector utilities the analysis stages share.
//!
//! Everything here is pure and reentrant; callers may invoke kernels
//! concurrently on distinct inputs.

pub mod eig;
pub mod matrix;
pub mod svd;
pub mod vecops;

pub use eig::{eig_general, spectral_radius, EigResult};
pub use matrix::{format_full, Matrix};
pub use svd::{svd, SvdResult};
pub use vecops::{cosine_similarity, dot, euclidean, norm2, sub};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("input contains non-finite entries")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("iteration cap exceeded without convergence")]
    NoConvergence,
    #[error("parse error at line {line}: {token:?}")]
    Parse { line: usize, token: String },
}
