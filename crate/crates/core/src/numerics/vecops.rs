//! Small vector kernels: dot products, norms, distances, cosine similarity.

use crate::numerics::NumericsError;
use crate::scalar::Scalar;

pub fn dot<F: Scalar>(u: &[F], v: &[F]) -> F {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(&a, &b)| a * b).sum()
}

pub fn norm2<F: Scalar>(v: &[F]) -> F {
    dot(v, v).sqrt()
}

pub fn sub<F: Scalar>(u: &[F], v: &[F]) -> Vec<F> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(&a, &b)| a - b).collect()
}

/// Cosine of the angle between two non-zero vectors, clamped to [-1, 1].
pub fn cosine_similarity<F: Scalar>(u: &[F], v: &[F]) -> Result<F, NumericsError> {
    if u.len() != v.len() {
        return Err(NumericsError::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let nu = norm2(u);
    let nv = norm2(v);
    if nu == F::zero() || nv == F::zero() {
        return Err(NumericsError::ZeroVector);
    }
    let c = dot(u, v) / (nu * nv);
    Ok(c.min(F::one()).max(-F::one()))
}

/// Euclidean distance between two equal-length vectors.
pub fn euclidean<F: Scalar>(u: &[F], v: &[F]) -> Result<F, NumericsError> {
    if u.len() != v.len() {
        return Err(NumericsError::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(u.iter()
        .zip(v)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<F>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cosine_of_vector_with_itself_is_one() {
        let v: Vec<f64> = vec![0.3, -1.2, 4.0];
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_of_vector_with_negation_is_minus_one() {
        let v: Vec<f64> = vec![0.3, -1.2, 4.0];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((cosine_similarity(&v, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_of_orthogonal_axes_is_zero() {
        let c = cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn cosine_rejects_zero_vector() {
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]),
            Err(NumericsError::ZeroVector)
        ));
    }

    #[test]
    fn cosine_is_scale_invariant_up_to_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a: f64 = rng.random_range(0.1..5.0);
            let b: f64 = -rng.random_range(0.1..5.0);
            let base = cosine_similarity(&u, &v).unwrap();
            let su: Vec<f64> = u.iter().map(|x| a * x).collect();
            let sv: Vec<f64> = v.iter().map(|x| b * x).collect();
            let scaled = cosine_similarity(&su, &sv).unwrap();
            assert!((scaled - base * (a * b).signum()).abs() < 1e-10);
        }
    }

    #[test]
    fn euclidean_three_four_five() {
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn euclidean_of_point_with_itself_is_zero() {
        let v = vec![1.0, 2.0, 3.0];
        assert_eq!(euclidean(&v, &v).unwrap(), 0.0);
    }

    #[test]
    fn euclidean_matches_componentwise_sum_of_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u: Vec<f64> = (0..8).map(|_| rng.random_range(-2.0..2.0)).collect();
        let v: Vec<f64> = (0..8).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut acc = 0.0;
        for i in 0..8 {
            acc += (u[i] - v[i]) * (u[i] - v[i]);
        }
        assert!((euclidean(&u, &v).unwrap() - acc.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn euclidean_rejects_length_mismatch() {
        assert!(matches!(
            euclidean(&[1.0], &[1.0, 2.0]),
            Err(NumericsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn metric_axioms_on_sampled_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let c: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let dab = euclidean(&a, &b).unwrap();
            let dba = euclidean(&b, &a).unwrap();
            let dac = euclidean(&a, &c).unwrap();
            let dcb = euclidean(&c, &b).unwrap();
            assert!(dab >= 0.0);
            assert_eq!(dab, dba);
            assert!(dab <= dac + dcb + 1e-12);
        }
    }
}
