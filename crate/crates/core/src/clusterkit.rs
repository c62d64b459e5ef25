//! KMeans clustering of hidden states, silhouette evaluation, centroid
//! distance statistics and readout-vector alignment.
//!
//! Matching between readout rows and centroids is a greedy bijection by
//! descending |cosine|: a centroid pointing exactly opposite a readout is
//! still its aligned partner, just with a reported similarity of -1.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numerics::{cosine_similarity, euclidean, Matrix, NumericsError};
use crate::scalar::Scalar;
use crate::statespace::{project, PcaModel, StateSpaceError};

const LLOYD_ITERATION_CAP: usize = 300;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("need at least {k} points for {k} clusters, got {points}")]
    TooFewPoints { k: usize, points: usize },
    #[error("silhouette needs between 2 and points-1 clusters, got {0}")]
    BadClusterCount(usize),
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("readout count {readouts} does not match centroid count {centroids}")]
    CountMismatch { readouts: usize, centroids: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
}

#[derive(Debug, Clone)]
pub struct ClusterResult<F> {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub centroids: Matrix<F>,
    pub inertia: F,
    pub seed: u64,
    pub restarts: usize,
    /// Inertia after each Lloyd iteration of the winning restart.
    pub inertia_trace: Vec<F>,
}

/// Lloyd's algorithm with uniformly drawn initial centroids, empty-cluster
/// reseeding and best-of-`restarts` selection by inertia.
pub fn kmeans<F: Scalar>(
    points: &Matrix<F>,
    k: usize,
    seed: u64,
    restarts: usize,
) -> Result<ClusterResult<F>, ClusterError> {
    if points.rows() < k || k == 0 {
        return Err(ClusterError::TooFewPoints {
            k,
            points: points.rows(),
        });
    }
    let mut best: Option<ClusterResult<F>> = None;
    for r in 0..restarts.max(1) {
        let restart_seed = seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let run = lloyd(points, k, restart_seed)?;
        let better = match &best {
            None => true,
            Some(b) => run.inertia < b.inertia,
        };
        if better {
            best = Some(ClusterResult {
                seed,
                restarts,
                ..run
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

#[allow(clippy::needless_range_loop)]
fn lloyd<F: Scalar>(points: &Matrix<F>, k: usize, seed: u64) -> Result<ClusterResult<F>, ClusterError> {
    let n = points.rows();
    let dim = points.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let indices: Vec<usize> = (0..n).collect();
    let chosen: Vec<usize> = indices.choose_multiple(&mut rng, k).copied().collect();
    let mut centroids = Matrix::zeros(k, dim);
    for (c, &i) in chosen.iter().enumerate() {
        centroids.row_mut(c).copy_from_slice(points.row(i));
    }

    let mut assignments = vec![usize::MAX; n];
    let mut trace = Vec::new();
    for _ in 0..LLOYD_ITERATION_CAP {
        // Assignment step; ties go to the lowest centroid index.
        let mut changed = false;
        for i in 0..n {
            let mut best_c = 0;
            let mut best_d = F::infinity();
            for c in 0..k {
                let d = sq_dist(points.row(i), centroids.row(c));
                if d < best_d {
                    best_d = d;
                    best_c = c;
                }
            }
            if assignments[i] != best_c {
                assignments[i] = best_c;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        // Update step.
        let mut counts = vec![0usize; k];
        let mut sums: Matrix<F> = Matrix::zeros(k, dim);
        for i in 0..n {
            counts[assignments[i]] += 1;
            let row = sums.row_mut(assignments[i]);
            for (s, &v) in row.iter_mut().zip(points.row(i)) {
                *s += v;
            }
        }
        let mut reseeded: Vec<usize> = Vec::new();
        for c in 0..k {
            if counts[c] > 0 {
                let inv = F::one() / F::of(counts[c] as f64);
                for (dst, &s) in centroids.row_mut(c).iter_mut().zip(sums.row(c)) {
                    *dst = s * inv;
                }
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Re-seed with the point farthest from its centroid.
                let mut far_i = 0;
                let mut far_d = F::neg_infinity();
                for i in 0..n {
                    if reseeded.contains(&i) {
                        continue;
                    }
                    let d = sq_dist(points.row(i), centroids.row(assignments[i]));
                    if d > far_d {
                        far_d = d;
                        far_i = i;
                    }
                }
                centroids.row_mut(c).copy_from_slice(points.row(far_i));
                reseeded.push(far_i);
            }
        }
        trace.push(inertia_of(points, &assignments, &centroids));
    }

    let inertia = inertia_of(points, &assignments, &centroids);
    Ok(ClusterResult {
        k,
        assignments,
        centroids,
        inertia,
        seed,
        restarts: 1,
        inertia_trace: trace,
    })
}

fn sq_dist<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

fn inertia_of<F: Scalar>(points: &Matrix<F>, assignments: &[usize], centroids: &Matrix<F>) -> F {
    (0..points.rows())
        .map(|i| sq_dist(points.row(i), centroids.row(assignments[i])))
        .sum()
}

#[derive(Debug, Clone)]
pub struct SilhouetteReport<F> {
    pub per_point: Vec<F>,
    /// Mean coefficient over all points.
    pub score: F,
}

/// Silhouette coefficients: `s(i) = (b - a) / max(a, b)` with `a` the mean
/// intra-cluster distance and `b` the smallest mean distance to another
/// cluster. Singleton clusters score 0 by convention.
pub fn silhouette<F: Scalar>(
    points: &Matrix<F>,
    assignments: &[usize],
) -> Result<SilhouetteReport<F>, ClusterError> {
    let n = points.rows();
    assert_eq!(assignments.len(), n, "one assignment per point");
    let k = assignments.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    if k < 2 || k > n.saturating_sub(1) {
        return Err(ClusterError::BadClusterCount(k));
    }
    let mut counts = vec![0usize; k];
    for &a in assignments {
        counts[a] += 1;
    }
    if let Some(c) = counts.iter().position(|&c| c == 0) {
        return Err(ClusterError::EmptyCluster(c));
    }

    let mut per_point = Vec::with_capacity(n);
    for i in 0..n {
        let own = assignments[i];
        if counts[own] == 1 {
            per_point.push(F::zero());
            continue;
        }
        let mut sums = vec![F::zero(); k];
        for j in 0..n {
            if j == i {
                continue;
            }
            sums[assignments[j]] += euclidean(points.row(i), points.row(j))?;
        }
        let a = sums[own] / F::of((counts[own] - 1) as f64);
        let mut b = F::infinity();
        for (c, &sum) in sums.iter().enumerate() {
            if c != own {
                b = b.min(sum / F::of(counts[c] as f64));
            }
        }
        let denom = a.max(b);
        per_point.push(if denom == F::zero() {
            F::zero()
        } else {
            (b - a) / denom
        });
    }
    let score = per_point.iter().copied().sum::<F>() / F::of(n as f64);
    Ok(SilhouetteReport { per_point, score })
}

/// Runs the same seeded clustering on full-dimensional points and on their
/// top-`d` projections; reports both silhouette scores.
pub fn dim_consistency_check<F: Scalar>(
    points_full: &Matrix<F>,
    pca: &PcaModel<F>,
    d: usize,
    k: usize,
    seed: u64,
    restarts: usize,
) -> Result<(F, F), ClusterError> {
    let full = kmeans(points_full, k, seed, restarts)?;
    let score_full = silhouette(points_full, &full.assignments)?.score;
    let projected = project(pca, points_full, d)?;
    let top = kmeans(&projected, k, seed, restarts)?;
    let score_topd = silhouette(&projected, &top.assignments)?.score;
    Ok((score_full, score_topd))
}

/// Mean and population standard deviation of centroid distances to a
/// reference state (typically the shared initial state).
pub fn centroid_distance_stats<F: Scalar>(
    centroids: &Matrix<F>,
    origin: &[F],
) -> Result<(F, F), ClusterError> {
    let ds = centroid_distances(centroids, origin)?;
    Ok(mean_std(&ds))
}

pub fn centroid_distances<F: Scalar>(
    centroids: &Matrix<F>,
    origin: &[F],
) -> Result<Vec<F>, ClusterError> {
    (0..centroids.rows())
        .map(|c| euclidean(centroids.row(c), origin).map_err(ClusterError::from))
        .collect()
}

pub(crate) fn mean_std<F: Scalar>(values: &[F]) -> (F, F) {
    let n = F::of(values.len() as f64);
    let mean = values.iter().copied().sum::<F>() / n;
    let var = values
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<F>()
        / n;
    (mean, var.sqrt())
}

/// Readout-to-centroid alignment: full cosine matrix, greedy bijective
/// matching by descending |cosine|, plus centroid distance statistics to the
/// given origin state.
#[derive(Debug, Clone)]
pub struct AlignmentReport<F> {
    /// `cosine[(i, j)]` between readout row `i` and centroid `j`.
    pub cosine: Matrix<F>,
    /// `(readout, centroid, cosine)` triples, a bijection.
    pub matches: Vec<(usize, usize, F)>,
    /// Mean signed cosine over matched pairs.
    pub alignment_mean: F,
    /// Set when an exhaustive search finds a strictly better matching than
    /// the greedy one (checked for k <= 8).
    pub greedy_suboptimal: bool,
    /// Distance from each centroid to the origin state, centroid order.
    pub ds: Vec<F>,
    pub ds_mean: F,
    pub ds_std: F,
}

pub fn match_readouts<F: Scalar>(
    readouts: &Matrix<F>,
    centroids: &Matrix<F>,
    origin: &[F],
) -> Result<AlignmentReport<F>, ClusterError> {
    let n = readouts.rows();
    let k = centroids.rows();
    if n != k {
        return Err(ClusterError::CountMismatch {
            readouts: n,
            centroids: k,
        });
    }
    let mut cosine = Matrix::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            cosine[(i, j)] = cosine_similarity(readouts.row(i), centroids.row(j))?;
        }
    }

    // Greedy: repeatedly take the strongest |cosine| among unmatched pairs.
    let mut matches: Vec<(usize, usize, F)> = Vec::with_capacity(n);
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; k];
    for _ in 0..n {
        let mut best: Option<(usize, usize, F)> = None;
        for i in 0..n {
            if row_used[i] {
                continue;
            }
            for j in 0..k {
                if col_used[j] {
                    continue;
                }
                let c = cosine[(i, j)];
                if best.map(|(_, _, b)| c.abs() > b.abs()).unwrap_or(true) {
                    best = Some((i, j, c));
                }
            }
        }
        let (i, j, c) = best.expect("unmatched pair remains");
        row_used[i] = true;
        col_used[j] = true;
        matches.push((i, j, c));
    }
    matches.sort_by_key(|&(i, _, _)| i);
    let alignment_mean =
        matches.iter().map(|&(_, _, c)| c).sum::<F>() / F::of(n as f64);

    let greedy_suboptimal = if n <= 8 {
        let greedy_total: F = matches.iter().map(|&(_, _, c)| c.abs()).sum();
        let optimal_total = best_assignment_abs(&cosine);
        optimal_total > greedy_total + F::of(1e-12)
    } else {
        false
    };

    let ds = centroid_distances(centroids, origin)?;
    let (ds_mean, ds_std) = mean_std(&ds);
    Ok(AlignmentReport {
        cosine,
        matches,
        alignment_mean,
        greedy_suboptimal,
        ds,
        ds_mean,
        ds_std,
    })
}

/// Exhaustive best bijection by total |cosine| (small k only).
fn best_assignment_abs<F: Scalar>(cosine: &Matrix<F>) -> F {
    fn go<F: Scalar>(cosine: &Matrix<F>, row: usize, used: &mut [bool]) -> F {
        if row == cosine.rows() {
            return F::zero();
        }
        let mut best = F::neg_infinity();
        for j in 0..cosine.cols() {
            if used[j] {
                continue;
            }
            used[j] = true;
            let total = cosine[(row, j)].abs() + go(cosine, row + 1, used);
            used[j] = false;
            best = best.max(total);
        }
        best
    }
    let mut used = vec![false; cosine.cols()];
    go(cosine, 0, &mut used)
}

/// Majority-intent purity: fraction of points whose true label equals the
/// majority label of their cluster.
pub fn cluster_purity(assignments: &[usize], labels: &[usize], n_labels: usize) -> f64 {
    let k = assignments.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut table = vec![vec![0usize; n_labels]; k];
    for (&a, &l) in assignments.iter().zip(labels) {
        table[a][l] += 1;
    }
    let majority: usize = table
        .iter()
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .sum();
    majority as f64 / assignments.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn blobs(
        centers: &[Vec<f64>],
        per_blob: usize,
        sigma: f64,
        seed: u64,
    ) -> (Matrix<f64>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = centers[0].len();
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for (b, c) in centers.iter().enumerate() {
            for _ in 0..per_blob {
                let row: Vec<f64> = (0..dim)
                    .map(|j| c[j] + sigma * (rng.random::<f64>() * 2.0 - 1.0))
                    .collect();
                rows.push(row);
                truth.push(b);
            }
        }
        (Matrix::from_rows(&rows), truth)
    }

    fn seven_centers() -> Vec<Vec<f64>> {
        // Pairwise distances >= 1 in 3-D.
        vec![
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 2.0],
            vec![2.0, 2.0, 0.0],
            vec![2.0, 0.0, 2.0],
            vec![0.0, 2.0, 2.0],
        ]
    }

    fn same_partition(a: &[usize], b: &[usize]) -> bool {
        // Equal up to relabeling.
        let n = a.len();
        for i in 0..n {
            for j in i + 1..n {
                if (a[i] == a[j]) != (b[i] == b[j]) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn k_one_returns_the_mean() {
        let points: Matrix<f64> =
            Matrix::from_rows(&[vec![1.0, 0.0], vec![3.0, 4.0], vec![5.0, 2.0]]);
        let r = kmeans(&points, 1, 0, 3).unwrap();
        assert!((r.centroids[(0, 0)] - 3.0).abs() < 1e-12);
        assert!((r.centroids[(0, 1)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn seven_blobs_recovered_exactly() {
        let (points, truth) = blobs(&seven_centers(), 30, 0.05, 1);
        let r = kmeans(&points, 7, 9, 10).unwrap();
        assert!(same_partition(&r.assignments, &truth));
    }

    #[test]
    fn duplicated_dataset_keeps_the_same_centroids() {
        let (points, _) = blobs(&seven_centers(), 20, 0.05, 2);
        let doubled_rows: Vec<Vec<f64>> = (0..points.rows())
            .chain(0..points.rows())
            .map(|i| points.row(i).to_vec())
            .collect();
        let doubled = Matrix::from_rows(&doubled_rows);
        let a = kmeans(&points, 7, 5, 10).unwrap();
        let b = kmeans(&doubled, 7, 5, 10).unwrap();
        // Same centroid set up to ordering.
        let mut sa: Vec<Vec<f64>> = (0..7).map(|c| a.centroids.row(c).to_vec()).collect();
        let mut sb: Vec<Vec<f64>> = (0..7).map(|c| b.centroids.row(c).to_vec()).collect();
        let key = |v: &Vec<f64>| (v[0] * 1e6) as i64 * 1_000_000 + (v[1] * 1e6) as i64;
        sa.sort_by_key(key);
        sb.sort_by_key(key);
        for (x, y) in sa.iter().zip(&sb) {
            for (p, q) in x.iter().zip(y) {
                assert!((p - q).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn inertia_never_increases_across_lloyd_iterations() {
        let (points, _) = blobs(&seven_centers(), 25, 0.4, 3);
        let r = kmeans(&points, 7, 11, 1).unwrap();
        for w in r.inertia_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "inertia increased: {w:?}");
        }
    }

    #[test]
    fn kmeans_rejects_more_clusters_than_points() {
        let points = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0]]);
        assert!(matches!(
            kmeans(&points, 3, 0, 1),
            Err(ClusterError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn silhouette_of_tight_far_clusters_is_high() {
        let (points, truth) = blobs(
            &[vec![0.0, 0.0], vec![10.0, 0.0]],
            15,
            0.05,
            4,
        );
        let s = silhouette(&points, &truth).unwrap();
        assert!(s.score > 0.95, "score {}", s.score);
    }

    #[test]
    fn silhouette_matches_hand_worked_example() {
        // Two clusters: {a=(0,0), b=(0,1)} and {c=(4,0), d=(4,1)}.
        let points = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![4.0, 0.0],
            vec![4.0, 1.0],
        ]);
        let assignments = vec![0, 0, 1, 1];
        let s = silhouette(&points, &assignments).unwrap();
        // For a: intra = 1, inter = (4 + sqrt(17)) / 2.
        let inter = (4.0 + 17.0f64.sqrt()) / 2.0;
        let expected = (inter - 1.0) / inter;
        for &v in &s.per_point {
            assert!((v - expected).abs() < 1e-12);
        }
        assert!((s.score - expected).abs() < 1e-12);
    }

    #[test]
    fn silhouette_singleton_cluster_scores_zero() {
        let points = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![5.0, 5.0],
        ]);
        let s = silhouette(&points, &[0, 0, 1]).unwrap();
        assert_eq!(s.per_point[2], 0.0);
    }

    #[test]
    fn silhouette_rejects_degenerate_clusterings() {
        let points = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        assert!(matches!(
            silhouette(&points, &[0, 0, 0, 0]),
            Err(ClusterError::BadClusterCount(1))
        ));
        // Cluster id 1 missing.
        assert!(matches!(
            silhouette(&points, &[0, 0, 0, 2]),
            Err(ClusterError::EmptyCluster(1))
        ));
    }

    #[test]
    fn silhouette_invariant_under_rigid_motion_and_scale() {
        let (points, truth) = blobs(&[vec![0.0, 0.0], vec![3.0, 1.0]], 12, 0.3, 6);
        let base = silhouette(&points, &truth).unwrap();
        let th: f64 = 0.9;
        let (c, s) = (th.cos(), th.sin());
        let moved = Matrix::from_fn(points.rows(), 2, |i, j| {
            let x = points[(i, 0)];
            let y = points[(i, 1)];
            let (rx, ry) = (c * x - s * y + 7.0, s * x + c * y - 2.0);
            2.5 * if j == 0 { rx } else { ry }
        });
        let transformed = silhouette(&moved, &truth).unwrap();
        for (a, b) in base.per_point.iter().zip(&transformed.per_point) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn centroid_stats_unit_circle() {
        let k = 7;
        let centroids = Matrix::from_fn(k, 2, |i, j| {
            let th = std::f64::consts::TAU * i as f64 / k as f64;
            if j == 0 {
                th.cos()
            } else {
                th.sin()
            }
        });
        let (mean, std) = centroid_distance_stats(&centroids, &[0.0, 0.0]).unwrap();
        assert!((mean - 1.0).abs() < 1e-12);
        assert!(std < 1e-12);
    }

    #[test]
    fn centroid_stats_three_and_five() {
        let centroids = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 5.0]]);
        let (mean, std) = centroid_distance_stats(&centroids, &[0.0, 0.0]).unwrap();
        assert_eq!(mean, 4.0);
        assert_eq!(std, 1.0);
    }

    #[test]
    fn centroid_stats_rejects_dimension_mismatch() {
        let centroids = Matrix::from_rows(&[vec![1.0, 2.0]]);
        assert!(centroid_distance_stats(&centroids, &[0.0, 0.0, 0.0]).is_err());
    }

    fn random_rows(n: usize, dim: usize, seed: u64) -> Matrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(n, dim, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn identical_centroids_match_identity_with_mean_one() {
        let readouts = random_rows(7, 5, 8);
        let report = match_readouts(&readouts, &readouts, &[0.0; 5]).unwrap();
        assert!((report.alignment_mean - 1.0).abs() < 1e-12);
        for (i, j, c) in &report.matches {
            assert_eq!(i, j);
            assert!((c - 1.0).abs() < 1e-12);
        }
        assert!(!report.greedy_suboptimal);
    }

    #[test]
    fn negated_centroids_match_with_cosine_minus_one() {
        let readouts = random_rows(7, 5, 9);
        let negated = Matrix::from_fn(7, 5, |i, j| -readouts[(i, j)]);
        let report = match_readouts(&readouts, &negated, &[0.0; 5]).unwrap();
        assert!((report.alignment_mean + 1.0).abs() < 1e-12);
        for (i, j, c) in &report.matches {
            assert_eq!(i, j);
            assert!((c + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn permuting_centroids_permutes_matching_but_not_cosines() {
        let readouts = random_rows(7, 6, 10);
        let perm = [3usize, 0, 6, 1, 5, 2, 4];
        let permuted = Matrix::from_fn(7, 6, |i, j| readouts[(perm[i], j)]);
        let a = match_readouts(&readouts, &readouts, &[0.0; 6]).unwrap();
        let b = match_readouts(&readouts, &permuted, &[0.0; 6]).unwrap();
        let mut ca: Vec<f64> = a.matches.iter().map(|&(_, _, c)| c).collect();
        let mut cb: Vec<f64> = b.matches.iter().map(|&(_, _, c)| c).collect();
        ca.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cb.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in ca.iter().zip(&cb) {
            assert!((x - y).abs() < 1e-12);
        }
        // Matching really is a bijection.
        let mut seen = vec![false; 7];
        for &(_, j, _) in &b.matches {
            assert!(!seen[j]);
            seen[j] = true;
        }
    }

    #[test]
    fn match_rejects_count_mismatch_and_zero_vectors() {
        let readouts = random_rows(7, 4, 11);
        let centroids = random_rows(6, 4, 12);
        assert!(matches!(
            match_readouts(&readouts, &centroids, &[0.0; 4]),
            Err(ClusterError::CountMismatch { .. })
        ));
        let zero = Matrix::<f64>::zeros(7, 4);
        assert!(match_readouts(&readouts, &zero, &[0.0; 4]).is_err());
    }

    #[test]
    fn purity_counts_majority_agreement() {
        // Cluster 0: labels {0, 0, 1}; cluster 1: labels {2, 2}.
        let assignments = vec![0, 0, 0, 1, 1];
        let labels = vec![0, 0, 1, 2, 2];
        assert!((cluster_purity(&assignments, &labels, 3) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn planar_data_clusters_identically_in_full_and_projected_space() {
        use crate::statespace::fit_pca;
        // Blobs on a 2-plane embedded in 5-D.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let u = [0.5, -0.3, 0.7, 0.1, -0.4];
        let v = [0.2, 0.8, -0.1, 0.5, 0.3];
        let mut rows = Vec::new();
        for b in 0..3 {
            for _ in 0..20 {
                let a = 3.0 * b as f64 + 0.1 * rng.random::<f64>();
                let c = 2.0 * b as f64 + 0.1 * rng.random::<f64>();
                rows.push((0..5).map(|j| a * u[j] + c * v[j]).collect::<Vec<f64>>());
            }
        }
        let points = Matrix::from_rows(&rows);
        let pca = fit_pca(&points).unwrap();
        let full = kmeans(&points, 3, 21, 5).unwrap();
        let proj = project(&pca, &points, 2).unwrap();
        let top = kmeans(&proj, 3, 21, 5).unwrap();
        assert!(same_partition(&full.assignments, &top.assignments));
    }

    #[test]
    fn isotropic_noise_scores_poorly_in_both_spaces() {
        use crate::statespace::fit_pca;
        let points = random_rows(150, 6, 14);
        let pca = fit_pca(&points).unwrap();
        let (full, topd) = dim_consistency_check(&points, &pca, 3, 7, 5, 5).unwrap();
        assert!(full < 0.3, "full {full}");
        assert!(topd < 0.3, "topd {topd}");
    }
}
