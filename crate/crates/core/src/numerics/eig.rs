//! Dense nonsymmetric eigendecomposition.
//!
//! Classic pipeline: balance the matrix, reduce to upper Hessenberg form by
//! stabilized elementary transforms, run the Francis double-shift QR
//! iteration, back-substitute for eigenvectors, and undo the balancing.
//! Complex eigenvalues of a real matrix come out in conjugate pairs with the
//! positive-imaginary member first.

use num_complex::Complex;

use crate::numerics::matrix::Matrix;
use crate::numerics::NumericsError;
use crate::scalar::Scalar;

/// Iterations allowed per deflation before giving up.
const MAX_QR_ITERATIONS: usize = 30;

#[derive(Debug, Clone)]
pub struct EigResult<F> {
    /// Eigenvalues sorted by descending magnitude (ties: descending real
    /// part, then descending imaginary part).
    pub values: Vec<Complex<F>>,
    /// Unit-norm right eigenvectors aligned with `values`, when requested.
    pub vectors: Option<Vec<Vec<Complex<F>>>>,
}

/// Eigendecomposition of a general square real matrix.
pub fn eig_general<F: Scalar>(
    m: &Matrix<F>,
    want_vectors: bool,
) -> Result<EigResult<F>, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    m.ensure_finite()?;

    let n = m.rows();
    let mut a = m.clone();
    let scale = balance(&mut a);
    let perm = hessenberg(&mut a);
    let mut v = Matrix::identity(n);
    accumulate_transforms(&a, &mut v, &perm);

    let mut re = vec![F::zero(); n];
    let mut im = vec![F::zero(); n];
    hqr2(&mut a, &mut v, &mut re, &mut im)?;
    unbalance(&mut v, &scale);

    // Unpack the packed real storage into complex pairs.
    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex<F>>> = Vec::with_capacity(n);
    let mut j = 0;
    while j < n {
        if im[j] == F::zero() {
            values.push(Complex::new(re[j], F::zero()));
            vectors.push((0..n).map(|i| Complex::new(v[(i, j)], F::zero())).collect());
            j += 1;
        } else {
            // Pair occupies columns j (real part) and j+1 (imaginary part).
            values.push(Complex::new(re[j], im[j]));
            vectors.push((0..n).map(|i| Complex::new(v[(i, j)], v[(i, j + 1)])).collect());
            values.push(Complex::new(re[j + 1], im[j + 1]));
            vectors.push((0..n).map(|i| Complex::new(v[(i, j)], -v[(i, j + 1)])).collect());
            j += 2;
        }
    }
    for vec in &mut vectors {
        normalize_phase(vec);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&values[i], &values[j]);
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap()
            .then(b.re.partial_cmp(&a.re).unwrap())
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    let values = order.iter().map(|&i| values[i]).collect();
    let vectors = if want_vectors {
        Some(order.iter().map(|&i| vectors[i].clone()).collect())
    } else {
        None
    };
    Ok(EigResult { values, vectors })
}

/// Spectral radius: max |lambda|.
pub fn spectral_radius<F: Scalar>(values: &[Complex<F>]) -> F {
    values.iter().map(|l| l.norm()).fold(F::zero(), F::max)
}

/// Scales the eigenvector to unit norm and rotates its phase so the largest
/// component is real and positive, which makes results reproducible.
fn normalize_phase<F: Scalar>(v: &mut [Complex<F>]) {
    let mut best = 0;
    for (i, c) in v.iter().enumerate() {
        if c.norm() > v[best].norm() {
            best = i;
        }
    }
    let pivot = v[best];
    let norm: F = v.iter().map(|c| c.norm_sqr()).sum::<F>().sqrt();
    if norm == F::zero() || pivot.norm() == F::zero() {
        return;
    }
    let phase = pivot.conj() / pivot.norm();
    for c in v.iter_mut() {
        *c = *c * phase / norm;
    }
}

/// Iterative row/column norm balancing; returns the applied scale factors.
fn balance<F: Scalar>(a: &mut Matrix<F>) -> Vec<F> {
    let n = a.rows();
    let radix = F::of(2.0);
    let sqrdx = radix * radix;
    let threshold = F::of(0.95);
    let mut scale = vec![F::one(); n];

    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = F::zero();
            let mut r = F::zero();
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == F::zero() || r == F::zero() {
                continue;
            }
            let s = c + r;
            let mut f = F::one();
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < threshold * s {
                done = false;
                let g = F::one() / f;
                scale[i] *= f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    scale
}

fn unbalance<F: Scalar>(v: &mut Matrix<F>, scale: &[F]) {
    for (i, &s) in scale.iter().enumerate() {
        for x in v.row_mut(i) {
            *x *= s;
        }
    }
}

/// Reduction to upper Hessenberg form by stabilized elementary similarity
/// transforms. Multipliers are stored in the zeroed part of `a`; the returned
/// permutation records the pivoting rows.
fn hessenberg<F: Scalar>(a: &mut Matrix<F>) -> Vec<usize> {
    let n = a.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    if n < 3 {
        return perm;
    }
    for m in 1..n - 1 {
        // Pivot on the largest subdiagonal entry for stability.
        let mut x = F::zero();
        let mut pivot = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                pivot = j;
            }
        }
        perm[m] = pivot;
        if pivot != m {
            for j in m - 1..n {
                let t = a[(pivot, j)];
                a[(pivot, j)] = a[(m, j)];
                a[(m, j)] = t;
            }
            for j in 0..n {
                let t = a[(j, pivot)];
                a[(j, pivot)] = a[(j, m)];
                a[(j, m)] = t;
            }
        }
        if x != F::zero() {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y == F::zero() {
                    continue;
                }
                y /= x;
                a[(i, m - 1)] = y;
                for j in m..n {
                    let t = a[(m, j)];
                    a[(i, j)] -= y * t;
                }
                for j in 0..n {
                    let t = a[(j, i)];
                    a[(j, m)] += y * t;
                }
            }
        }
    }
    perm
}

/// Builds the accumulated Hessenberg-reduction transform in `v` from the
/// multipliers and permutation stored by [`hessenberg`].
fn accumulate_transforms<F: Scalar>(a: &Matrix<F>, v: &mut Matrix<F>, perm: &[usize]) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for mp in (1..n - 1).rev() {
        for k in mp + 1..n {
            v[(k, mp)] = a[(k, mp - 1)];
        }
        let i = perm[mp];
        if i != mp {
            for j in mp..n {
                v[(mp, j)] = v[(i, j)];
                v[(i, j)] = F::zero();
            }
            v[(i, mp)] = F::one();
        }
    }
}

/// Francis double-shift QR iteration on an upper Hessenberg matrix, with
/// accumulation of transforms in `v` and eigenvector back-substitution.
/// On return `re`/`im` hold the eigenvalues; columns of `v` hold eigenvectors
/// in packed real form.
#[allow(clippy::too_many_lines)]
fn hqr2<F: Scalar>(
    a: &mut Matrix<F>,
    v: &mut Matrix<F>,
    re: &mut [F],
    im: &mut [F],
) -> Result<(), NumericsError> {
    let n = a.rows();
    let eps = F::epsilon();
    let half = F::of(0.5);

    let mut anorm = F::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    if anorm == F::zero() {
        // Zero matrix: all eigenvalues zero, eigenvectors are the basis that
        // is already in v.
        return Ok(());
    }

    let mut nn = n - 1;
    let mut t = F::zero();
    let (mut p, mut q, mut r);
    let (mut s, mut z);

    'outer: loop {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l > 0 {
                s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == F::zero() {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = F::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                // One root found.
                re[nn] = x + t;
                a[(nn, nn)] = x + t;
                if nn == 0 {
                    break 'outer;
                }
                nn -= 1;
            } else {
                let mut y = a[(nn - 1, nn - 1)];
                let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
                if l == nn - 1 {
                    // Two roots found.
                    p = half * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    a[(nn, nn)] = x;
                    a[(nn - 1, nn - 1)] = y + t;
                    if q >= F::zero() {
                        // Real pair.
                        z = p + z.copysign(p);
                        re[nn - 1] = x + z;
                        re[nn] = re[nn - 1];
                        if z != F::zero() {
                            re[nn] = x - w / z;
                        }
                        x = a[(nn, nn - 1)];
                        s = x.abs() + z.abs();
                        p = x / s;
                        q = z / s;
                        r = (p * p + q * q).sqrt();
                        p /= r;
                        q /= r;
                        for j in nn - 1..n {
                            z = a[(nn - 1, j)];
                            a[(nn - 1, j)] = q * z + p * a[(nn, j)];
                            a[(nn, j)] = q * a[(nn, j)] - p * z;
                        }
                        for i in 0..=nn {
                            z = a[(i, nn - 1)];
                            a[(i, nn - 1)] = q * z + p * a[(i, nn)];
                            a[(i, nn)] = q * a[(i, nn)] - p * z;
                        }
                        for i in 0..n {
                            z = v[(i, nn - 1)];
                            v[(i, nn - 1)] = q * z + p * v[(i, nn)];
                            v[(i, nn)] = q * v[(i, nn)] - p * z;
                        }
                    } else {
                        // Complex pair; positive-imaginary member first.
                        re[nn] = x + p;
                        im[nn] = -z;
                        re[nn - 1] = re[nn];
                        im[nn - 1] = z;
                    }
                    if nn <= 1 {
                        break 'outer;
                    }
                    nn -= 2;
                } else {
                    // No roots yet; perform a double QR step.
                    if its == MAX_QR_ITERATIONS {
                        return Err(NumericsError::NoConvergence);
                    }
                    if its == 10 || its == 20 {
                        // Exceptional shift.
                        t += x;
                        for i in 0..=nn {
                            let d = a[(i, i)];
                            a[(i, i)] = d - x;
                        }
                        s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                        y = F::of(0.75) * s;
                        x = y;
                        w = F::of(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[(m, m)];
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - r - s;
                        r = a[(m + 2, m + 1)];
                        s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let vv =
                            p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u <= eps * vv {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nn - 1 {
                        a[(i + 2, i)] = F::zero();
                        if i != m {
                            a[(i + 2, i - 1)] = F::zero();
                        }
                    }
                    for k in m..nn {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = F::zero();
                            if k + 1 != nn {
                                r = a[(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != F::zero() {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let sgn = (p * p + q * q + r * r).sqrt().copysign(p);
                        if sgn == F::zero() {
                            continue;
                        }
                        if k == m {
                            if l != m {
                                a[(k, k - 1)] = -a[(k, k - 1)];
                            }
                        } else {
                            a[(k, k - 1)] = -sgn * x;
                        }
                        p += sgn;
                        x = p / sgn;
                        y = q / sgn;
                        z = r / sgn;
                        q /= p;
                        r /= p;
                        for j in k..n {
                            p = a[(k, j)] + q * a[(k + 1, j)];
                            if k + 1 != nn {
                                p += r * a[(k + 2, j)];
                                let d = a[(k + 2, j)];
                                a[(k + 2, j)] = d - p * z;
                            }
                            let d1 = a[(k + 1, j)];
                            a[(k + 1, j)] = d1 - p * y;
                            let d0 = a[(k, j)];
                            a[(k, j)] = d0 - p * x;
                        }
                        let mmin = if nn < k + 3 { nn } else { k + 3 };
                        for i in 0..=mmin {
                            p = x * a[(i, k)] + y * a[(i, k + 1)];
                            if k + 1 != nn {
                                p += z * a[(i, k + 2)];
                                let d = a[(i, k + 2)];
                                a[(i, k + 2)] = d - p * r;
                            }
                            let d1 = a[(i, k + 1)];
                            a[(i, k + 1)] = d1 - p * q;
                            let d0 = a[(i, k)];
                            a[(i, k)] = d0 - p;
                        }
                        for i in 0..n {
                            p = x * v[(i, k)] + y * v[(i, k + 1)];
                            if k + 1 != nn {
                                p += z * v[(i, k + 2)];
                                let d = v[(i, k + 2)];
                                v[(i, k + 2)] = d - p * r;
                            }
                            let d1 = v[(i, k + 1)];
                            v[(i, k + 1)] = d1 - p * q;
                            let d0 = v[(i, k)];
                            v[(i, k)] = d0 - p;
                        }
                    }
                }
            }
            if l + 1 >= nn {
                break;
            }
        }
    }

    back_substitute(a, v, re, im, anorm);
    Ok(())
}

/// Solves the quasi-triangular system for the eigenvectors and transforms
/// them back to the original basis.
fn back_substitute<F: Scalar>(
    a: &mut Matrix<F>,
    v: &mut Matrix<F>,
    re: &[F],
    im: &[F],
    anorm: F,
) {
    let n = a.rows();
    let eps = F::epsilon();
    let two = F::of(2.0);
    let (mut r, mut s, mut z);
    r = F::zero();
    s = F::zero();
    z = F::zero();

    for nn in (0..n).rev() {
        let p = re[nn];
        let mut q = im[nn];
        if q == F::zero() {
            // Real eigenvalue.
            let mut m = nn;
            a[(nn, nn)] = F::one();
            if nn == 0 {
                continue;
            }
            let mut i = nn - 1;
            loop {
                let w = a[(i, i)] - p;
                r = F::zero();
                for j in m..=nn {
                    r += a[(i, j)] * a[(j, nn)];
                }
                if im[i] < F::zero() {
                    z = w;
                    s = r;
                } else {
                    m = i;
                    if im[i] == F::zero() {
                        let mut t = w;
                        if t == F::zero() {
                            t = eps * anorm;
                        }
                        a[(i, nn)] = -r / t;
                    } else {
                        let x = a[(i, i + 1)];
                        let y = a[(i + 1, i)];
                        q = (re[i] - p) * (re[i] - p) + im[i] * im[i];
                        let t = (x * s - z * r) / q;
                        a[(i, nn)] = t;
                        if x.abs() > z.abs() {
                            a[(i + 1, nn)] = (-r - w * t) / x;
                        } else {
                            a[(i + 1, nn)] = (-s - y * t) / z;
                        }
                    }
                    // Guard against overflow while the vector is unscaled.
                    let t = a[(i, nn)].abs();
                    if eps * t * t > F::one() {
                        for j in i..=nn {
                            let d = a[(j, nn)];
                            a[(j, nn)] = d / t;
                        }
                    }
                }
                if i == 0 {
                    break;
                }
                i -= 1;
            }
        } else if q < F::zero() {
            // Complex pair; solve for the column pair (nn-1, nn).
            let na = nn - 1;
            let mut m = na;
            if a[(nn, na)].abs() > a[(na, nn)].abs() {
                a[(na, na)] = q / a[(nn, na)];
                a[(na, nn)] = -(a[(nn, nn)] - p) / a[(nn, na)];
            } else {
                let tmp = Complex::new(F::zero(), -a[(na, nn)]) / Complex::new(a[(na, na)] - p, q);
                a[(na, na)] = tmp.re;
                a[(na, nn)] = tmp.im;
            }
            a[(nn, na)] = F::zero();
            a[(nn, nn)] = F::one();
            if nn < 2 {
                continue;
            }
            for i in (0..nn - 1).rev() {
                let w = a[(i, i)] - p;
                let mut ra = F::zero();
                let mut sa = F::zero();
                for j in m..=nn {
                    ra += a[(i, j)] * a[(j, na)];
                    sa += a[(i, j)] * a[(j, nn)];
                }
                if im[i] < F::zero() {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    m = i;
                    if im[i] == F::zero() {
                        let tmp = Complex::new(-ra, -sa) / Complex::new(w, q);
                        a[(i, na)] = tmp.re;
                        a[(i, nn)] = tmp.im;
                    } else {
                        let x = a[(i, i + 1)];
                        let y = a[(i + 1, i)];
                        let mut vr = (re[i] - p) * (re[i] - p) + im[i] * im[i] - q * q;
                        let vi = two * q * (re[i] - p);
                        if vr == F::zero() && vi == F::zero() {
                            vr = eps * anorm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let tmp = Complex::new(x * r - z * ra + q * sa, x * s - z * sa - q * ra)
                            / Complex::new(vr, vi);
                        a[(i, na)] = tmp.re;
                        a[(i, nn)] = tmp.im;
                        if x.abs() > z.abs() + q.abs() {
                            a[(i + 1, na)] = (-ra - w * a[(i, na)] + q * a[(i, nn)]) / x;
                            a[(i + 1, nn)] = (-sa - w * a[(i, nn)] - q * a[(i, na)]) / x;
                        } else {
                            let tmp = Complex::new(-r - y * a[(i, na)], -s - y * a[(i, nn)])
                                / Complex::new(z, q);
                            a[(i + 1, na)] = tmp.re;
                            a[(i + 1, nn)] = tmp.im;
                        }
                    }
                    let t = a[(i, na)].abs().max(a[(i, nn)].abs());
                    if eps * t * t > F::one() {
                        for j in i..=nn {
                            let dna = a[(j, na)];
                            let dnn = a[(j, nn)];
                            a[(j, na)] = dna / t;
                            a[(j, nn)] = dnn / t;
                        }
                    }
                }
            }
        }
    }

    // Multiply by the accumulated transform to recover the original basis.
    for j in (0..n).rev() {
        for i in 0..n {
            let mut acc = F::zero();
            for k in 0..=j {
                acc += v[(i, k)] * a[(k, j)];
            }
            v[(i, j)] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_reals(result: &EigResult<f64>) -> Vec<f64> {
        let mut vals: Vec<f64> = result.values.iter().map(|c| c.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    fn residual(m: &Matrix<f64>, result: &EigResult<f64>) -> f64 {
        // max over eigenpairs of ||A v - lambda v||_inf
        let n = m.rows();
        let vectors = result.vectors.as_ref().unwrap();
        let mut worst: f64 = 0.0;
        for (lambda, vec) in result.values.iter().zip(vectors) {
            for i in 0..n {
                let mut av = Complex::new(0.0, 0.0);
                for j in 0..n {
                    av += Complex::new(m[(i, j)], 0.0) * vec[j];
                }
                worst = worst.max((av - lambda * vec[i]).norm());
            }
        }
        worst
    }

    #[test]
    fn diagonal_matrix_returns_diagonal() {
        let m = Matrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 1.5]]);
        let r = eig_general(&m, false).unwrap();
        assert_eq!(sorted_reals(&r), vec![0.5, 1.5]);
        assert!(r.values.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn rotation_matrix_has_unit_imaginary_pair() {
        let m: Matrix<f64> = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let r = eig_general(&m, true).unwrap();
        assert!((r.values[0].re).abs() < 1e-12);
        assert!((r.values[0].im - 1.0).abs() < 1e-12);
        assert!((r.values[1].im + 1.0).abs() < 1e-12);
        assert!(residual(&m, &r) < 1e-10);
    }

    #[test]
    fn triangular_matrix_returns_its_diagonal() {
        let m = Matrix::from_rows(&[
            vec![2.0, 5.0, -3.0, 1.0],
            vec![0.0, -1.0, 4.0, 2.0],
            vec![0.0, 0.0, 0.25, -7.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ]);
        let r = eig_general(&m, false).unwrap();
        let got = sorted_reals(&r);
        let want = vec![-1.0, 0.25, 1.0, 2.0];
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "got {got:?}");
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        for seed in 0..5u64 {
            let m = random_matrix(6, seed);
            let r = eig_general(&m, false).unwrap();
            let sum_re: f64 = r.values.iter().map(|c| c.re).sum();
            let sum_im: f64 = r.values.iter().map(|c| c.im).sum();
            assert!((sum_re - m.trace()).abs() < 1e-6);
            assert!(sum_im.abs() < 1e-8);
        }
    }

    #[test]
    fn conjugate_pair_symmetry() {
        for seed in 0..8u64 {
            let m = random_matrix(5, seed);
            let r = eig_general(&m, false).unwrap();
            let mut values = r.values.clone();
            // Every eigenvalue with nonzero imaginary part has its conjugate
            // in the multiset.
            while let Some(c) = values.pop() {
                if c.im == 0.0 {
                    continue;
                }
                let pos = values
                    .iter()
                    .position(|o| (o.re - c.re).abs() < 1e-9 && (o.im + c.im).abs() < 1e-9);
                assert!(pos.is_some(), "unpaired eigenvalue {c}");
                values.remove(pos.unwrap());
            }
        }
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        for seed in 0..6u64 {
            let m = random_matrix(7, seed);
            let r = eig_general(&m, true).unwrap();
            assert!(residual(&m, &r) < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn rejects_non_square() {
        let m = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(
            eig_general(&m, false),
            Err(NumericsError::NotSquare { .. })
        ));
    }

    #[test]
    fn zero_matrix_is_all_zero_eigenvalues() {
        let m = Matrix::<f64>::zeros(3, 3);
        let r = eig_general(&m, true).unwrap();
        assert!(r.values.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn one_by_one_matrix() {
        let m = Matrix::from_rows(&[vec![-2.5]]);
        let r = eig_general(&m, true).unwrap();
        assert_eq!(r.values[0], Complex::new(-2.5, 0.0));
        assert_eq!(r.vectors.unwrap()[0][0].norm(), 1.0);
    }

    fn random_matrix(n: usize, seed: u64) -> Matrix<f64> {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xE16);
        Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
    }
}
