//! Train small recurrent intent classifiers and reverse-engineer their
//! hidden-state dynamics.
//!
//! The crate is organized along the analysis pipeline:
//!
//! - [`corpus`]: dataset ingestion, vocabulary, tokenization, splits.
//! - [`numerics`]: dense SVD / eigendecomposition / distance kernels.
//! - [`model`]: vanilla, GRU and LSTM cells with an embedding layer and an
//!   affine readout, exposing full hidden-state trajectories.
//! - [`train`]: cross-entropy, backpropagation through time, Adam, early
//!   stopping.
//! - [`statespace`]: hidden-state collection, PCA, intrinsic dimensionality,
//!   projections.
//! - [`clusterkit`]: KMeans, silhouette, centroid statistics, readout
//!   alignment.
//! - [`fixedpoints`]: speed minimization, Jacobians, stability
//!   classification, fixed-point census.
//!
//! All numeric kernels are generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below pin the `f64` instantiation the pipeline uses.

pub mod clusterkit;
pub mod corpus;
pub mod fixedpoints;
pub mod model;
pub mod numerics;
pub mod scalar;
pub mod statespace;
pub mod train;

pub use scalar::Scalar;

/// Dense `f64` matrix used throughout the pipeline.
pub type Matrix64 = numerics::Matrix<f64>;
/// Eigendecomposition result at `f64`.
pub type EigResult64 = numerics::EigResult<f64>;
