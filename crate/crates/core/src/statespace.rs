//! Hidden-state collection, PCA, intrinsic dimensionality and projections.
//!
//! The set of hidden states visited by a dataset is treated as a point cloud
//! in the n-dimensional state space. PCA of the centered cloud gives the
//! variance captured per direction; the intrinsic dimensionality is the
//! smallest number of leading components whose cumulative explained variance
//! reaches the threshold (0.95 unless overridden).
//!
//! Projection centers by the PCA training mean before applying the component
//! matrix, i.e. `p = (h - mean) U[:, :k]`.

use serde::Serialize;
use thiserror::Error;

use crate::corpus::TokenSeq;
use crate::model::{forward, HiddenTrajectory, ModelError, ModelParams};
use crate::numerics::{svd, Matrix, NumericsError};
use crate::scalar::Scalar;
use crate::train::Example;

#[derive(Debug, Error)]
pub enum StateSpaceError {
    #[error("empty dataset")]
    EmptyData,
    #[error("need at least 2 rows to fit a PCA, got {0}")]
    TooFewRows(usize),
    #[error("threshold {0} outside (0, 1]")]
    BadThreshold(f64),
    #[error("component count {k} outside [1, {n}]")]
    BadComponentCount { k: usize, n: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectMode {
    /// Every visited state `h_1..h_T` of every sentence.
    All,
    /// Only the final state `h_T` of each sentence.
    FinalOnly,
}

/// Where one collected row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowInfo {
    pub sentence: usize,
    /// Step index: row equals `trajectory.states[timestep]`.
    pub timestep: usize,
    pub label: usize,
    pub is_final: bool,
}

/// Hidden states stacked row-wise with per-row provenance.
#[derive(Debug, Clone)]
pub struct StateSpaceSample<F> {
    pub data: Matrix<F>,
    pub provenance: Vec<RowInfo>,
}

/// Runs every sentence through the model and stacks the visited hidden
/// states (`h_0` is excluded; it is shared by all sentences).
pub fn collect_states<F: Scalar>(
    params: &ModelParams<F>,
    data: &[Example],
    mode: CollectMode,
) -> Result<StateSpaceSample<F>, StateSpaceError> {
    if data.is_empty() {
        return Err(StateSpaceError::EmptyData);
    }
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut provenance = Vec::new();
    for (sentence, (seq, label)) in data.iter().enumerate() {
        let (traj, _) = forward(params, seq)?;
        let t_max = traj.len();
        match mode {
            CollectMode::All => {
                for t in 1..=t_max {
                    rows.push(traj.states[t].clone());
                    provenance.push(RowInfo {
                        sentence,
                        timestep: t,
                        label: *label,
                        is_final: t == t_max,
                    });
                }
            }
            CollectMode::FinalOnly => {
                rows.push(traj.states[t_max].clone());
                provenance.push(RowInfo {
                    sentence,
                    timestep: t_max,
                    label: *label,
                    is_final: true,
                });
            }
        }
    }
    Ok(StateSpaceSample {
        data: Matrix::from_rows(&rows),
        provenance,
    })
}

/// Fitted PCA: mean, orthonormal components (columns, by descending
/// variance) and per-component explained-variance ratios.
#[derive(Debug, Clone)]
pub struct PcaModel<F> {
    pub mean: Vec<F>,
    /// `n x n` orthonormal; column `k` is the k-th principal direction.
    pub components: Matrix<F>,
    /// Length `n`, non-negative, non-increasing, summing to 1.
    pub explained_variance_ratio: Vec<F>,
    /// Set when the sample had no variance at all (e.g. a zero-weight model
    /// parks every state at the origin).
    pub degenerate: bool,
}

/// PCA via SVD of the row-centered sample matrix.
pub fn fit_pca<F: Scalar>(sample: &Matrix<F>) -> Result<PcaModel<F>, StateSpaceError> {
    let rows = sample.rows();
    let n = sample.cols();
    if rows < 2 {
        return Err(StateSpaceError::TooFewRows(rows));
    }
    let mut mean = vec![F::zero(); n];
    for i in 0..rows {
        for (m, &v) in mean.iter_mut().zip(sample.row(i)) {
            *m += v;
        }
    }
    let inv = F::one() / F::of(rows as f64);
    for m in &mut mean {
        *m *= inv;
    }
    let centered = Matrix::from_fn(rows, n, |i, j| sample[(i, j)] - mean[j]);
    let result = svd(&centered)?;

    let k = result.s.len();
    let total: F = result.s.iter().map(|&s| s * s).sum();
    let degenerate = total <= F::zero();
    let mut ratios = vec![F::zero(); n];
    if degenerate {
        ratios[0] = F::one();
    } else {
        for (r, &s) in ratios.iter_mut().zip(&result.s) {
            *r = s * s / total;
        }
    }

    // vt is k x n; transpose into columns and complete the basis when the
    // sample had fewer rows than dimensions.
    let mut components = Matrix::zeros(n, n);
    for row in 0..k {
        for col in 0..n {
            components[(col, row)] = result.vt[(row, col)];
        }
    }
    if k < n {
        let missing: Vec<usize> = (k..n).collect();
        crate::numerics::svd::complete_orthonormal(&mut components, &missing);
    }

    Ok(PcaModel {
        mean,
        components,
        explained_variance_ratio: ratios,
        degenerate,
    })
}

/// Intrinsic dimensionality at an explained-variance threshold.
#[derive(Debug, Clone, Serialize)]
pub struct DimReport {
    pub d: usize,
    pub threshold: f64,
    /// Cumulative explained-variance curve, `cumulative[k]` for k+1 leading
    /// components.
    pub cumulative: Vec<f64>,
    pub degenerate: bool,
}

/// Smallest `k` whose cumulative explained-variance ratio reaches the
/// threshold (clamped to `n` if rounding keeps the sum a hair below 1).
pub fn intrinsic_dim<F: Scalar>(
    pca: &PcaModel<F>,
    threshold: f64,
) -> Result<DimReport, StateSpaceError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(StateSpaceError::BadThreshold(threshold));
    }
    let mut cumulative = Vec::with_capacity(pca.explained_variance_ratio.len());
    let mut acc = 0.0;
    for r in &pca.explained_variance_ratio {
        acc += r.to_f64_lossy();
        cumulative.push(acc);
    }
    let d = cumulative
        .iter()
        .position(|&c| c >= threshold)
        .map(|k| k + 1)
        .unwrap_or(cumulative.len());
    Ok(DimReport {
        d,
        threshold,
        cumulative,
        degenerate: pca.degenerate,
    })
}

/// Projects rows onto the `k` leading components: `p = (h - mean) U[:, :k]`.
pub fn project<F: Scalar>(
    pca: &PcaModel<F>,
    states: &Matrix<F>,
    k: usize,
) -> Result<Matrix<F>, StateSpaceError> {
    let n = pca.components.rows();
    if k == 0 || k > n {
        return Err(StateSpaceError::BadComponentCount { k, n });
    }
    let mut out = Matrix::zeros(states.rows(), k);
    for i in 0..states.rows() {
        let p = project_vec(pca, states.row(i), k)?;
        out.row_mut(i).copy_from_slice(&p);
    }
    Ok(out)
}

/// Single-vector form of [`project`].
pub fn project_vec<F: Scalar>(
    pca: &PcaModel<F>,
    state: &[F],
    k: usize,
) -> Result<Vec<F>, StateSpaceError> {
    let n = pca.components.rows();
    if k == 0 || k > n {
        return Err(StateSpaceError::BadComponentCount { k, n });
    }
    let centered: Vec<F> = state.iter().zip(&pca.mean).map(|(&h, &m)| h - m).collect();
    Ok((0..k)
        .map(|col| {
            (0..n)
                .map(|row| centered[row] * pca.components[(row, col)])
                .sum()
        })
        .collect())
}

/// Projects a whole trajectory (`h_0..h_T`, order preserved) into a
/// k-dimensional polyline.
pub fn project_trajectory<F: Scalar>(
    pca: &PcaModel<F>,
    traj: &HiddenTrajectory<F>,
    k: usize,
) -> Result<Vec<Vec<F>>, StateSpaceError> {
    traj.states
        .iter()
        .map(|h| project_vec(pca, h, k))
        .collect()
}

/// Convenience: tokenize-free trajectory projection for one sequence.
pub fn trajectory_of<F: Scalar>(
    params: &ModelParams<F>,
    seq: &TokenSeq,
) -> Result<HiddenTrajectory<F>, StateSpaceError> {
    Ok(forward(params, seq)?.0)
}
