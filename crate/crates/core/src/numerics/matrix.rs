//! Row-major dense matrix container shared by every numeric stage.

use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use crate::numerics::NumericsError;
use crate::scalar::Scalar;

/// Dense row-major matrix with positive dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "matrix needs at least one column");
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [F] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [F] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<(), NumericsError> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(NumericsError::NonFinite)
        }
    }

    pub fn transpose(&self) -> Matrix<F> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == F::zero() {
                    continue;
                }
                let orow = other.row(k);
                let out_row = out.row_mut(i);
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn matvec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum::<F>()
            })
            .collect()
    }

    /// `self^T * v`, i.e. `v` contracted against rows.
    pub fn matvec_transposed(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.rows, v.len(), "matvec dimension mismatch");
        let mut out = vec![F::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn scale(&mut self, s: F) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    /// Rank-one update `self += u * v^T`.
    pub fn add_outer(&mut self, u: &[F], v: &[F]) {
        assert_eq!(self.rows, u.len(), "outer product shape mismatch");
        assert_eq!(self.cols, v.len(), "outer product shape mismatch");
        for (i, &ui) in u.iter().enumerate() {
            for (x, &vj) in self.row_mut(i).iter_mut().zip(v) {
                *x += ui * vj;
            }
        }
    }

    /// `self += s * other`, elementwise.
    pub fn add_scaled(&mut self, other: &Matrix<F>, s: F) {
        assert_eq!(self.rows, other.rows, "shape mismatch");
        assert_eq!(self.cols, other.cols, "shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn max_abs_diff(&self, other: &Matrix<F>) -> F {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(F::zero(), F::max)
    }

    pub fn trace(&self) -> F {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Serializes one row per line, comma separated, at full `f64` round-trip
    /// precision (17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", format_full(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, NumericsError> {
        let mut rows: Vec<Vec<F>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map(F::of)
                        .map_err(|_| NumericsError::Parse {
                            line: lineno + 1,
                            token: tok.trim().to_string(),
                        })
                })
                .collect::<Result<Vec<F>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(NumericsError::Parse {
                line: 0,
                token: "<empty matrix>".to_string(),
            });
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NumericsError::Parse {
                line: 0,
                token: "<ragged rows>".to_string(),
            });
        }
        Ok(Matrix::from_rows(&rows))
    }
}

/// Formats a scalar with enough digits to round-trip an `f64` exactly.
pub fn format_full<F: Scalar>(v: F) -> String {
    format!("{:.16e}", v.to_f64_lossy())
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub fn solve_linear<F: Scalar>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert!(a.is_square(), "solve needs a square matrix");
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.rows();
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[(row, col)].abs() > m[(pivot, col)].abs() {
                pivot = row;
            }
        }
        if m[(pivot, col)].abs() < F::epsilon() * F::of(n as f64) {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = t;
            }
            x.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = m[(row, col)] / m[(col, col)];
            if factor == F::zero() {
                continue;
            }
            for j in col..n {
                let t = m[(col, j)];
                m[(row, j)] -= factor * t;
            }
            let t = x[col];
            x[row] -= factor * t;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for j in col + 1..n {
            acc -= m[(col, j)] * x[j];
        }
        x[col] = acc / m[(col, col)];
    }
    Some(x)
}

impl<F: Scalar> Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F: Scalar> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_against_hand_product() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Matrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]);
        let c = a.matmul(&b);
        assert_eq!(c.row(0), &[19.0, 22.0]);
        assert_eq!(c.row(1), &[43.0, 50.0]);
    }

    #[test]
    fn matvec_transposed_matches_explicit_transpose() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        let v = vec![10.0, 20.0];
        assert_eq!(a.matvec_transposed(&v), a.transpose().matvec(&v));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let a = Matrix::from_rows(&[
            vec![std::f64::consts::PI, -1.0 / 3.0],
            vec![1e-300, 6.02214076e23],
        ]);
        let b: Matrix<f64> = Matrix::from_csv(&a.to_csv()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_parse_error_reports_line() {
        let err = Matrix::<f64>::from_csv("1.0,2.0\n1.0,oops\n").unwrap_err();
        match err {
            NumericsError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
