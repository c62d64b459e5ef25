//! Thin singular value decomposition via one-sided Jacobi rotations.
//!
//! Columns of the input are rotated in pairs until they are mutually
//! orthogonal; the surviving column norms are the singular values. Plane
//! rotations keep the accumulated `V` orthogonal to machine precision, which
//! is what the PCA stage leans on.

use crate::numerics::matrix::Matrix;
use crate::numerics::NumericsError;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 64;

/// `a = u * diag(s) * vt`, with `s` non-negative and non-increasing.
#[derive(Debug, Clone)]
pub struct SvdResult<F> {
    /// Left singular vectors, `rows x k` with orthonormal columns.
    pub u: Matrix<F>,
    /// Singular values, length `k = min(rows, cols)`, descending.
    pub s: Vec<F>,
    /// Right singular vectors transposed, `k x cols` with orthonormal rows.
    pub vt: Matrix<F>,
}

pub fn svd<F: Scalar>(a: &Matrix<F>) -> Result<SvdResult<F>, NumericsError> {
    a.ensure_finite()?;
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        // Factor the transpose and swap the roles of U and V.
        let t = svd_tall(&a.transpose())?;
        Ok(SvdResult {
            u: t.vt.transpose(),
            s: t.s,
            vt: t.u.transpose(),
        })
    }
}

fn svd_tall<F: Scalar>(a: &Matrix<F>) -> Result<SvdResult<F>, NumericsError> {
    let m = a.rows();
    let n = a.cols();

    // Work on columns directly; they are the unit of every operation here.
    let mut cols: Vec<Vec<F>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<F>> = (0..n)
        .map(|j| {
            let mut e = vec![F::zero(); n];
            e[j] = F::one();
            e
        })
        .collect();

    let tol = F::epsilon() * F::of(64.0);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() || gamma == F::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (F::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (F::one() + zeta * zeta).sqrt());
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence);
    }

    // Column norms are the singular values; sort them descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<F> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut s = Vec::with_capacity(n);
    let mut u = Matrix::zeros(m, n);
    let mut vt = Matrix::zeros(n, n);
    let s_max = order.first().map(|&i| norms[i]).unwrap_or(F::zero());
    let negligible = s_max * F::epsilon() * F::of(m as f64);
    let mut degenerate = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        s.push(norms[j]);
        for i in 0..n {
            vt[(k, i)] = v[j][i];
        }
        if norms[j] > negligible && norms[j] > F::zero() {
            for i in 0..m {
                u[(i, k)] = cols[j][i] / norms[j];
            }
        } else {
            degenerate.push(k);
        }
    }
    if !degenerate.is_empty() {
        complete_orthonormal(&mut u, &degenerate);
    }

    Ok(SvdResult { u, s, vt })
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn rotate_pair<F: Scalar>(cols: &mut [Vec<F>], p: usize, q: usize, c: F, s: F) {
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    let (head, tail) = cols.split_at_mut(hi);
    let (cp, cq) = (&mut head[lo], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = c * *x - s * *y;
        let yq = s * *x + c * *y;
        *x = xp;
        *y = yq;
    }
}

/// Fills the listed columns of `u` with unit vectors orthogonal to all other
/// columns, so rank-deficient inputs still yield an orthonormal basis.
pub(crate) fn complete_orthonormal<F: Scalar>(u: &mut Matrix<F>, missing: &[usize]) {
    let m = u.rows();
    let n = u.cols();
    for &k in missing {
        let mut best: Option<(F, Vec<F>)> = None;
        for e in 0..m {
            let mut cand = vec![F::zero(); m];
            cand[e] = F::one();
            for j in 0..n {
                // Skip the column being filled and missing columns not yet filled.
                if j == k || (missing.contains(&j) && j > k) {
                    continue;
                }
                let proj: F = (0..m).map(|i| u[(i, j)] * cand[i]).sum();
                for i in 0..m {
                    let uij = u[(i, j)];
                    cand[i] -= proj * uij;
                }
            }
            let norm = dot(&cand, &cand).sqrt();
            if best.as_ref().map(|(b, _)| norm > *b).unwrap_or(true) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("matrix has at least one row");
        assert!(norm > F::of(1e-6), "orthonormal completion failed");
        for i in 0..m {
            u[(i, k)] = cand[i] / norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_residual(m: &Matrix<f64>) -> f64 {
        // Columns: max |M^T M - I|.
        let g = m.transpose().matmul(m);
        let mut worst: f64 = 0.0;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }

    fn reconstruct(r: &SvdResult<f64>) -> Matrix<f64> {
        let k = r.s.len();
        let mut us = r.u.clone();
        for i in 0..us.rows() {
            for j in 0..k {
                us[(i, j)] *= r.s[j];
            }
        }
        us.matmul(&r.vt)
    }

    #[test]
    fn diagonal_two_by_two() {
        let a: Matrix<f64> = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]);
        let r = svd(&a).unwrap();
        assert!((r.s[0] - 3.0).abs() < 1e-12);
        assert!((r.s[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_matrix_has_unit_singular_values() {
        let th: f64 = 0.73;
        let a = Matrix::from_rows(&[vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]);
        let r = svd(&a).unwrap();
        for s in &r.s {
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_values_are_descending_and_nonnegative() {
        let a = random_matrix(7, 5, 42);
        let r = svd(&a).unwrap();
        for w in r.s.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert!(r.s.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn factors_are_orthonormal_and_reconstruct() {
        for seed in [1u64, 2, 3] {
            for (m, n) in [(6, 4), (4, 6), (5, 5)] {
                let a = random_matrix(m, n, seed);
                let r = svd(&a).unwrap();
                assert!(orthonormality_residual(&r.u) < 1e-10);
                assert!(orthonormality_residual(&r.vt.transpose()) < 1e-10);
                assert!(reconstruct(&r).max_abs_diff(&a) < 1e-8);
            }
        }
    }

    #[test]
    fn rank_deficient_input_still_yields_orthonormal_basis() {
        // Two identical columns: rank 2 in a 4x3 matrix.
        let a: Matrix<f64> = Matrix::from_rows(&[
            vec![1.0, 1.0, 0.5],
            vec![2.0, 2.0, -0.25],
            vec![-1.0, -1.0, 1.5],
            vec![0.5, 0.5, 2.0],
        ]);
        let r = svd(&a).unwrap();
        assert!(r.s[2].abs() < 1e-10);
        assert!(orthonormality_residual(&r.u) < 1e-10);
        assert!(reconstruct(&r).max_abs_diff(&a) < 1e-8);
    }

    #[test]
    fn singular_values_invariant_under_row_permutation() {
        let a = random_matrix(6, 3, 9);
        let rows: Vec<Vec<f64>> = (0..6).map(|i| a.row(i).to_vec()).collect();
        let permuted: Vec<Vec<f64>> = [5, 2, 0, 4, 1, 3]
            .iter()
            .map(|&i: &usize| rows[i].clone())
            .collect();
        let b = Matrix::from_rows(&permuted);
        let ra = svd(&a).unwrap();
        let rb = svd(&b).unwrap();
        for (x, y) in ra.s.iter().zip(&rb.s) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_finite_input() {
        let mut a = Matrix::<f64>::zeros(2, 2);
        a[(0, 0)] = f64::NAN;
        assert!(matches!(svd(&a), Err(NumericsError::NonFinite)));
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix<f64> {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }
}
