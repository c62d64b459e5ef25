//! Fixed-point structure of the trained recurrence under zero input.
//!
//! The speed of a state is `q = 0.5 * ||h - F(h, 0)||^2`; approximate fixed
//! points are minima of `q` below a tolerance. The search runs an Adam
//! descent on `q` from many initial conditions sampled off real
//! trajectories, with a Newton polish once a candidate is close (Newton on
//! the root problem `h - F(h, 0) = 0` converges quadratically at hyperbolic
//! fixed points and also lands on saddles, which plain map iteration would
//! miss). Candidates are deduplicated, their recurrent Jacobians
//! eigendecomposed, and each point classified by the count of eigenvalues
//! outside the unit circle.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::model::{
    forward, input_jacobian as cell_input_jacobian, state_jacobian as cell_state_jacobian,
    step_backward, step_embedded_cached, CellState, ModelError, ModelParams, StateCotangent,
};
use crate::numerics::{eig_general, matrix::solve_linear, Matrix, NumericsError};
use crate::scalar::Scalar;
use crate::statespace::{project_vec, PcaModel, StateSpaceError};
use crate::train::Example;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Error)]
pub enum FpError {
    #[error("state contains non-finite entries")]
    NonFiniteState,
    #[error("optimization produced a non-finite iterate at step {0}")]
    NonFiniteIterate(usize),
    #[error("empty dataset")]
    EmptyData,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
}

/// Search and classification parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FpConfig {
    /// Candidates with `q` below this are approximate fixed points.
    pub q_tolerance: f64,
    /// Euclidean merge radius in the full state space.
    pub dedup_radius: f64,
    pub max_opt_iterations: usize,
    /// Adam learning rate for the speed descent, decayed as `lr / (1 + c t)`.
    pub learning_rate: f64,
    pub lr_decay: f64,
    /// Half-width of the band around `|lambda| = 1` treated as marginal.
    pub unit_circle_margin: f64,
    pub ic_count: usize,
    pub seed: u64,
}

impl Default for FpConfig {
    fn default() -> Self {
        FpConfig {
            q_tolerance: 1e-8,
            dedup_radius: 0.1,
            max_opt_iterations: 5000,
            learning_rate: 1e-2,
            lr_decay: 1e-3,
            unit_circle_margin: 1e-3,
            ic_count: 25_000,
            seed: 0,
        }
    }
}

impl FpConfig {
    /// The optimizer aims two orders of magnitude below the report threshold.
    pub fn stop_tolerance(&self) -> f64 {
        self.q_tolerance * 1e-2
    }
}

/// The autonomous map `s -> F(s, 0)` for one model: constant zero input in
/// embedding space, with the LSTM state stacked as `(h, c)`.
pub struct SpeedProblem<'a, F> {
    params: &'a ModelParams<F>,
    zero_input: Vec<F>,
}

impl<'a, F: Scalar> SpeedProblem<'a, F> {
    pub fn new(params: &'a ModelParams<F>) -> Self {
        SpeedProblem {
            params,
            zero_input: vec![F::zero(); params.config.embed_dim],
        }
    }

    pub fn state_dim(&self) -> usize {
        self.params.config.state_dim()
    }

    /// One application of the update map under zero input.
    pub fn map(&self, state: &[F]) -> Vec<F> {
        let s = CellState::from_flat(&self.params.config, state);
        let next = crate::model::step_embedded(self.params, &s, &self.zero_input);
        next.to_flat()
    }

    /// `s - F(s, 0)`.
    pub fn residual(&self, state: &[F]) -> Vec<F> {
        self.map(state)
            .iter()
            .zip(state)
            .map(|(&f, &s)| s - f)
            .collect()
    }

    /// Speed `q = 0.5 ||s - F(s, 0)||^2`.
    pub fn speed(&self, state: &[F]) -> Result<F, FpError> {
        if state.iter().any(|v| !v.is_finite()) {
            return Err(FpError::NonFiniteState);
        }
        let r = self.residual(state);
        Ok(F::of(0.5) * r.iter().map(|&v| v * v).sum::<F>())
    }

    /// Speed and its analytic gradient `(I - J)^T (s - F(s, 0))`, with the
    /// Jacobian-transpose product computed by one reverse-mode step.
    pub fn speed_and_grad(&self, state: &[F]) -> Result<(F, Vec<F>), FpError> {
        if state.iter().any(|v| !v.is_finite()) {
            return Err(FpError::NonFiniteState);
        }
        let s = CellState::from_flat(&self.params.config, state);
        let (next, cache) = step_embedded_cached(self.params, &s, &self.zero_input);
        let flat_next = next.to_flat();
        let r: Vec<F> = state.iter().zip(&flat_next).map(|(&a, &b)| a - b).collect();
        let q = F::of(0.5) * r.iter().map(|&v| v * v).sum::<F>();

        let n = self.params.config.hidden_dim;
        let cot = match self.params.config.cell_type {
            crate::model::CellType::Lstm => StateCotangent {
                dh: r[..n].to_vec(),
                dc: Some(r[n..].to_vec()),
            },
            _ => StateCotangent {
                dh: r.clone(),
                dc: None,
            },
        };
        let (prev, _) = step_backward(self.params, &cache, &cot, None);
        let mut jt_r = prev.dh;
        if let Some(dc) = prev.dc {
            jt_r.extend(dc);
        }
        let grad: Vec<F> = r.iter().zip(&jt_r).map(|(&ri, &ji)| ri - ji).collect();
        Ok((q, grad))
    }

    /// Recurrent Jacobian of the update at `(state, 0)`.
    pub fn jacobian(&self, state: &[F]) -> Matrix<F> {
        let s = CellState::from_flat(&self.params.config, state);
        cell_state_jacobian(self.params, &s, &self.zero_input)
    }
}

/// Free-function form of the speed evaluation.
pub fn speed<F: Scalar>(problem: &SpeedProblem<F>, state: &[F]) -> Result<F, FpError> {
    problem.speed(state)
}

/// Recurrent Jacobian at a state under zero input.
pub fn recurrent_jacobian<F: Scalar>(params: &ModelParams<F>, state: &[F]) -> Matrix<F> {
    let s = CellState::from_flat(&params.config, state);
    let zero = vec![F::zero(); params.config.embed_dim];
    cell_state_jacobian(params, &s, &zero)
}

/// Input Jacobian at a state under zero input.
pub fn input_jacobian<F: Scalar>(params: &ModelParams<F>, state: &[F]) -> Matrix<F> {
    let s = CellState::from_flat(&params.config, state);
    let zero = vec![F::zero(); params.config.embed_dim];
    cell_input_jacobian(params, &s, &zero)
}

/// Samples `count` initial conditions uniformly with replacement from the
/// states visited by the dataset (all timesteps, `h_0` excluded; stacked
/// `(h, c)` for the LSTM).
pub fn sample_ics<F: Scalar>(
    params: &ModelParams<F>,
    data: &[Example],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<F>>, FpError> {
    if data.is_empty() {
        return Err(FpError::EmptyData);
    }
    let mut visited: Vec<Vec<F>> = Vec::new();
    for (seq, _) in data {
        let (traj, _) = forward(params, seq)?;
        for t in 1..=traj.len() {
            visited.push(traj.flat_state(t));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| visited[rng.random_range(0..visited.len())].clone())
        .collect())
}

#[derive(Debug, Clone)]
pub struct MinimizeOutcome<F> {
    pub state: Vec<F>,
    pub q: F,
    pub iterations: usize,
    pub converged: bool,
}

/// Adam descent on the speed with inverse-time learning-rate decay and a
/// Newton polish near roots. Returns the final point whether or not the stop
/// tolerance was reached.
pub fn minimize_speed<F: Scalar>(
    problem: &SpeedProblem<F>,
    ic: &[F],
    config: &FpConfig,
) -> Result<MinimizeOutcome<F>, FpError> {
    const NEWTON_TRIGGER: f64 = 1e-2;
    // Descent that improves q by less than 10% over this many iterations is
    // stalled: one Newton rescue is attempted, then the candidate is
    // abandoned (it would be filtered by the q threshold anyway).
    const STALL_WINDOW: usize = 200;
    let stop = F::of(config.stop_tolerance());
    let dim = problem.state_dim();
    debug_assert_eq!(ic.len(), dim);

    let mut state = ic.to_vec();
    let mut q = problem.speed(&state)?;
    if q < stop {
        return Ok(MinimizeOutcome {
            state,
            q,
            iterations: 0,
            converged: true,
        });
    }

    let (b1, b2, eps) = (F::of(0.9), F::of(0.999), F::of(1e-8));
    let mut m = vec![F::zero(); dim];
    let mut v = vec![F::zero(); dim];
    let mut iterations = 0usize;
    let mut last_newton = 0usize;
    let mut window_q = q;

    for t in 1..=config.max_opt_iterations {
        let (q_now, grad) = problem.speed_and_grad(&state)?;
        q = q_now;
        if q < stop {
            return Ok(MinimizeOutcome {
                state,
                q,
                iterations,
                converged: true,
            });
        }

        let stalled = t % STALL_WINDOW == 0 && q > window_q * F::of(0.9);
        if t % STALL_WINDOW == 0 {
            window_q = q;
        }

        // Newton polish: cheap once we are near a root, and it also nails
        // saddles, which plain descent approaches only slowly.
        if (q < F::of(NEWTON_TRIGGER) || stalled) && t >= last_newton + 25 {
            last_newton = t;
            if let Some((ns, nq, used)) = newton_descent(problem, &state, q, stop)? {
                iterations += used;
                state = ns;
                q = nq;
                if q < stop {
                    return Ok(MinimizeOutcome {
                        state,
                        q,
                        iterations,
                        converged: true,
                    });
                }
                continue;
            } else if stalled {
                // Rescue failed; stop wasting the iteration budget.
                break;
            }
        } else if stalled {
            break;
        }

        let lr = F::of(config.learning_rate) / (F::one() + F::of(config.lr_decay * t as f64));
        let corr1 = F::one() - b1.powi(t as i32);
        let corr2 = F::one() - b2.powi(t as i32);
        for k in 0..dim {
            m[k] = b1 * m[k] + (F::one() - b1) * grad[k];
            v[k] = b2 * v[k] + (F::one() - b2) * grad[k] * grad[k];
            let m_hat = m[k] / corr1;
            let v_hat = v[k] / corr2;
            state[k] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        iterations += 1;
        if state.iter().any(|x| !x.is_finite()) {
            return Err(FpError::NonFiniteIterate(t));
        }
    }

    q = problem.speed(&state)?;
    Ok(MinimizeOutcome {
        state,
        q,
        iterations,
        converged: q < stop,
    })
}

/// Newton iteration on the root problem `s - F(s, 0) = 0`, accepting steps
/// only while they at least halve the speed. Returns the improved point or
/// `None` when the first step already fails.
fn newton_descent<F: Scalar>(
    problem: &SpeedProblem<F>,
    start: &[F],
    q0: F,
    stop: F,
) -> Result<Option<(Vec<F>, F, usize)>, FpError> {
    const NEWTON_STEPS: usize = 30;
    let dim = problem.state_dim();
    let mut state = start.to_vec();
    let mut q = q0;
    let mut used = 0usize;
    for _ in 0..NEWTON_STEPS {
        let jac = problem.jacobian(&state);
        let mut a = Matrix::identity(dim);
        a.add_scaled(&jac, -F::one());
        let r = problem.residual(&state);
        let Some(delta) = solve_linear(&a, &r) else {
            break;
        };
        let cand: Vec<F> = state.iter().zip(&delta).map(|(&s, &d)| s - d).collect();
        if cand.iter().any(|x| !x.is_finite()) {
            break;
        }
        let cq = problem.speed(&cand)?;
        used += 1;
        if cq < q * F::of(0.5) {
            state = cand;
            q = cq;
            if q < stop {
                break;
            }
        } else {
            break;
        }
    }
    if q < q0 {
        Ok(Some((state, q, used)))
    } else {
        Ok(None)
    }
}

/// A merged fixed-point candidate before classification.
#[derive(Debug, Clone)]
pub struct FpCandidate<F> {
    pub state: Vec<F>,
    pub q: F,
    /// Initial conditions whose optimization landed on this representative.
    pub n_converged_ics: usize,
}

/// Greedy merge: candidates are processed by ascending `q` (ties broken
/// lexicographically by state for order independence); each joins the first
/// representative within `dedup_radius`, else founds a new one. The
/// representative is therefore the lowest-q member of its cluster.
pub fn dedup<F: Scalar>(candidates: &[MinimizeOutcome<F>], radius: f64) -> Vec<FpCandidate<F>> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&candidates[i], &candidates[j]);
        a.q.partial_cmp(&b.q)
            .unwrap()
            .then_with(|| lex_cmp(&a.state, &b.state))
    });
    let r2 = F::of(radius * radius);
    let mut reps: Vec<FpCandidate<F>> = Vec::new();
    for &i in &order {
        let c = &candidates[i];
        let mut joined = false;
        for rep in reps.iter_mut() {
            let d2: F = rep
                .state
                .iter()
                .zip(&c.state)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            if d2 <= r2 {
                rep.n_converged_ics += 1;
                joined = true;
                break;
            }
        }
        if !joined {
            reps.push(FpCandidate {
                state: c.state.clone(),
                q: c.q,
                n_converged_ics: 1,
            });
        }
    }
    reps
}

fn lex_cmp<F: Scalar>(a: &[F], b: &[F]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Saddle,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub kind: Stability,
    /// Count of eigenvalues with `|lambda| > 1 + margin`.
    pub index: usize,
    /// Some eigenvalue sits within `margin` of the unit circle.
    pub marginal: bool,
}

/// Stability from the eigenvalue moduli: index 0 is an attractor, full index
/// a totally unstable point, anything between a saddle.
pub fn classify<F: Scalar>(eigenvalues: &[Complex<F>], margin: f64) -> Classification {
    let m = F::of(margin);
    let dim = eigenvalues.len();
    let index = eigenvalues
        .iter()
        .filter(|l| l.norm() > F::one() + m)
        .count();
    let marginal = eigenvalues
        .iter()
        .any(|l| (l.norm() - F::one()).abs() <= m);
    let kind = if index == 0 {
        Stability::Stable
    } else if index == dim {
        Stability::Unstable
    } else {
        Stability::Saddle
    };
    Classification {
        kind,
        index,
        marginal,
    }
}

/// A classified approximate fixed point.
#[derive(Debug, Clone)]
pub struct FixedPoint<F> {
    pub state: Vec<F>,
    pub q: F,
    pub jacobian: Matrix<F>,
    pub eigenvalues: Vec<Complex<F>>,
    pub eigenvectors: Option<Vec<Vec<Complex<F>>>>,
    pub kind: Stability,
    pub index: usize,
    pub marginal: bool,
    pub n_converged_ics: usize,
}

/// Census result: classified points plus marginal cases kept aside.
#[derive(Debug, Clone)]
pub struct Census<F> {
    pub points: Vec<FixedPoint<F>>,
    /// Points with an eigenvalue too close to the unit circle to classify
    /// confidently; excluded from the summary counts.
    pub marginal: Vec<FixedPoint<F>>,
    pub attempted_ics: usize,
    pub converged_ics: usize,
}

impl<F: Scalar> Census<F> {
    pub fn n_stable(&self) -> usize {
        self.points.iter().filter(|p| p.kind == Stability::Stable).count()
    }

    pub fn n_one_index(&self) -> usize {
        self.points.iter().filter(|p| p.index == 1).count()
    }

    pub fn n_higher_index(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.index >= 2 && p.kind != Stability::Unstable)
            .count()
    }

    pub fn n_unstable(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.kind == Stability::Unstable)
            .count()
    }
}

/// Minimizes the speed from every initial condition, filters by the
/// tolerance, merges duplicates, re-verifies the residual speed and
/// classifies each representative by its Jacobian spectrum.
pub fn find_fixed_points<F: Scalar>(
    params: &ModelParams<F>,
    ics: &[Vec<F>],
    config: &FpConfig,
) -> Result<Census<F>, FpError> {
    let problem = SpeedProblem::new(params);
    let tol = F::of(config.q_tolerance);

    let mut outcomes = Vec::new();
    for ic in ics {
        // A diverging candidate is discarded, not fatal.
        match minimize_speed(&problem, ic, config) {
            Ok(o) => {
                if o.q < tol {
                    outcomes.push(o);
                }
            }
            Err(FpError::NonFiniteIterate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let converged = outcomes.len();
    let reps = dedup(&outcomes, config.dedup_radius);

    let mut points = Vec::new();
    let mut marginal = Vec::new();
    for rep in reps {
        // Post-hoc residual check on the merged representative.
        let q = problem.speed(&rep.state)?;
        if q >= tol {
            continue;
        }
        let jacobian = problem.jacobian(&rep.state);
        let eig = eig_general(&jacobian, true)?;
        let class = classify(&eig.values, config.unit_circle_margin);
        let fp = FixedPoint {
            state: rep.state,
            q,
            jacobian,
            eigenvalues: eig.values,
            eigenvectors: eig.vectors,
            kind: class.kind,
            index: class.index,
            marginal: class.marginal,
            n_converged_ics: rep.n_converged_ics,
        };
        if class.marginal {
            marginal.push(fp);
        } else {
            points.push(fp);
        }
    }
    Ok(Census {
        points,
        marginal,
        attempted_ics: ics.len(),
        converged_ics: converged,
    })
}

/// Full pipeline: sample the initial conditions from the dataset
/// trajectories, then run [`find_fixed_points`].
pub fn fp_census<F: Scalar>(
    params: &ModelParams<F>,
    data: &[Example],
    config: &FpConfig,
) -> Result<Census<F>, FpError> {
    let ics = sample_ics(params, data, config.ic_count, config.seed)?;
    find_fixed_points(params, &ics, config)
}

/// Radii statistics per saddle index (0 = attractors) in the top-3
/// projection: distance to the projected-space origin and, as a second
/// reference, to the projection of the zero state.
#[derive(Debug, Clone, Serialize)]
pub struct RadiiGroup {
    /// 0 for attractors, otherwise the saddle index.
    pub index: usize,
    pub count: usize,
    /// Mean/std of the norm of the top-3 projection.
    pub r_mean: f64,
    pub r_std: f64,
    /// Mean/std of the distance to the projected initial state.
    pub r0_mean: f64,
    pub r0_std: f64,
}

/// Groups the census by exact index and measures top-3 projection radii.
/// For LSTM states only the hidden part is projected (the PCA lives in
/// hidden space).
pub fn fp_radii<F: Scalar>(
    points: &[FixedPoint<F>],
    pca: &PcaModel<F>,
) -> Result<Vec<RadiiGroup>, FpError> {
    let n = pca.components.rows();
    let k = 3.min(n);
    let origin = project_vec(pca, &vec![F::zero(); n], k)?;
    let mut indices: Vec<usize> = points.iter().map(|p| p.index).collect();
    indices.sort_unstable();
    indices.dedup();

    let mut groups = Vec::new();
    for idx in indices {
        let mut radii = Vec::new();
        let mut radii0 = Vec::new();
        for p in points.iter().filter(|p| p.index == idx) {
            let proj = project_vec(pca, &p.state[..n], k)?;
            radii.push(norm(&proj));
            radii0.push(dist(&proj, &origin));
        }
        let (r_mean, r_std) = crate::clusterkit::mean_std(&radii);
        let (r0_mean, r0_std) = crate::clusterkit::mean_std(&radii0);
        groups.push(RadiiGroup {
            index: idx,
            count: radii.len(),
            r_mean: r_mean.to_f64_lossy(),
            r_std: r_std.to_f64_lossy(),
            r0_mean: r0_mean.to_f64_lossy(),
            r0_std: r0_std.to_f64_lossy(),
        });
    }
    Ok(groups)
}

fn norm<F: Scalar>(v: &[F]) -> F {
    v.iter().map(|&x| x * x).sum::<F>().sqrt()
}

fn dist<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<F>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenSeq;
    use crate::model::{init_params, zero_params, CellType, CellWeights, ModelConfig};

    fn scalar_tanh_cell(gain: f64) -> ModelParams<f64> {
        // Vanilla cell with h' = tanh(gain * h): 1-D autonomous map.
        let mut p = zero_params(&ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 1,
            hidden_dim: 1,
            vocab_size: 2,
            n_classes: 2,
            seed: 0,
        });
        if let CellWeights::Vanilla { w_h, .. } = &mut p.cell {
            w_h[(0, 0)] = gain;
        }
        p
    }

    /// Independent 1-D root of h = tanh(gain h) by bisection.
    fn tanh_root(gain: f64) -> f64 {
        let g = |h: f64| (gain * h).tanh() - h;
        let (mut lo, mut hi) = (0.5, 1.5);
        assert!(g(lo) > 0.0 && g(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn speed_of_zero_weight_cell_is_half_norm_squared() {
        let p: ModelParams<f64> = zero_params(&ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 2,
            hidden_dim: 3,
            vocab_size: 4,
            n_classes: 2,
            seed: 0,
        });
        let problem = SpeedProblem::new(&p);
        assert_eq!(problem.speed(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        let q = problem.speed(&[1.0, 2.0, 2.0]).unwrap();
        assert!((q - 4.5).abs() < 1e-15);
    }

    #[test]
    fn speed_is_zero_exactly_at_fixed_points() {
        let p = scalar_tanh_cell(2.0);
        let problem = SpeedProblem::new(&p);
        let root = tanh_root(2.0);
        assert!((root - 0.9575).abs() < 1e-4);
        assert!(problem.speed(&[root]).unwrap() < 1e-6);
        assert!(problem.speed(&[0.0]).unwrap() == 0.0);
        assert!(problem.speed(&[0.5]).unwrap() > 1e-3);
    }

    #[test]
    fn speed_rejects_non_finite_state() {
        let p = scalar_tanh_cell(2.0);
        let problem = SpeedProblem::new(&p);
        assert!(matches!(
            problem.speed(&[f64::NAN]),
            Err(FpError::NonFiniteState)
        ));
    }

    #[test]
    fn gradient_of_speed_matches_finite_differences() {
        for cell in [CellType::Vanilla, CellType::Gru, CellType::Lstm] {
            let p: ModelParams<f64> = init_params(&ModelConfig {
                cell_type: cell,
                embed_dim: 3,
                hidden_dim: 4,
                vocab_size: 6,
                n_classes: 3,
                seed: 7,
            });
            let problem = SpeedProblem::new(&p);
            let dim = problem.state_dim();
            let state: Vec<f64> = (0..dim).map(|k| 0.3 * ((k as f64) + 1.0).sin()).collect();
            let (_, grad) = problem.speed_and_grad(&state).unwrap();
            let delta = 1e-6;
            for k in 0..dim {
                let mut plus = state.clone();
                plus[k] += delta;
                let mut minus = state.clone();
                minus[k] -= delta;
                let fd = (problem.speed(&plus).unwrap() - problem.speed(&minus).unwrap())
                    / (2.0 * delta);
                assert!(
                    (fd - grad[k]).abs() < 1e-7,
                    "{cell:?} coord {k}: fd {fd} vs {}",
                    grad[k]
                );
            }
        }
    }

    #[test]
    fn sample_ics_is_seeded_and_from_trajectories() {
        let p: ModelParams<f64> = init_params(&ModelConfig {
            cell_type: CellType::Gru,
            embed_dim: 3,
            hidden_dim: 4,
            vocab_size: 8,
            n_classes: 3,
            seed: 1,
        });
        let data: Vec<Example> = (0..4)
            .map(|i| (TokenSeq { ids: vec![1 + i, 2, 3 + i] }, 0))
            .collect();
        let a = sample_ics(&p, &data, 50, 9).unwrap();
        let b = sample_ics(&p, &data, 50, 9).unwrap();
        assert_eq!(a.len(), 50);
        assert_eq!(a, b);
        // Every sample appears in some trajectory.
        let mut visited = Vec::new();
        for (seq, _) in &data {
            let (traj, _) = forward(&p, seq).unwrap();
            for t in 1..=traj.len() {
                visited.push(traj.flat_state(t));
            }
        }
        for s in &a {
            assert!(visited.contains(s));
        }
    }

    #[test]
    fn minimizer_returns_immediately_at_a_fixed_point() {
        let p = scalar_tanh_cell(2.0);
        let problem = SpeedProblem::new(&p);
        let out = minimize_speed(&problem, &[0.0], &FpConfig::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.q, 0.0);
        assert!(out.converged);
    }

    #[test]
    fn minimizer_finds_the_scalar_tanh_root() {
        let p = scalar_tanh_cell(2.0);
        let problem = SpeedProblem::new(&p);
        let out = minimize_speed(&problem, &[0.5], &FpConfig::default()).unwrap();
        assert!(out.converged);
        let root = tanh_root(2.0);
        assert!((out.state[0] - root).abs() < 1e-4, "got {}", out.state[0]);
    }

    #[test]
    fn zero_weight_cell_converges_to_origin() {
        let p = zero_params(&ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 2,
            hidden_dim: 3,
            vocab_size: 4,
            n_classes: 2,
            seed: 0,
        });
        let problem = SpeedProblem::new(&p);
        let out = minimize_speed(&problem, &[0.9, -0.7, 0.4], &FpConfig::default()).unwrap();
        assert!(out.converged);
        assert!(out.state.iter().all(|&v: &f64| v.abs() < 1e-4));
    }

    #[test]
    fn dedup_merges_close_and_keeps_far() {
        let mk = |s: Vec<f64>, q: f64| MinimizeOutcome {
            state: s,
            q,
            iterations: 1,
            converged: true,
        };
        let close = [mk(vec![0.0, 0.0], 1e-12), mk(vec![1e-6, 0.0], 2e-12)];
        let reps = dedup(&close, 0.1);
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].n_converged_ics, 2);
        assert_eq!(reps[0].q, 1e-12); // lowest-q member is the representative

        let far = [mk(vec![0.0, 0.0], 1e-12), mk(vec![1.0, 0.0], 2e-12)];
        assert_eq!(dedup(&far, 0.1).len(), 2);
    }

    #[test]
    fn dedup_is_order_independent_for_separated_candidates() {
        use rand::seq::SliceRandom;
        let mut outcomes = Vec::new();
        for i in 0..6 {
            for j in 0..5 {
                outcomes.push(MinimizeOutcome {
                    state: vec![i as f64, j as f64 * 1e-3],
                    q: 1e-12 * (1.0 + j as f64),
                    iterations: 1,
                    converged: true,
                });
            }
        }
        let baseline: Vec<Vec<f64>> = dedup(&outcomes, 0.1)
            .into_iter()
            .map(|r| r.state)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            outcomes.shuffle(&mut rng);
            let got: Vec<Vec<f64>> = dedup(&outcomes, 0.1)
                .into_iter()
                .map(|r| r.state)
                .collect();
            assert_eq!(got, baseline);
        }
    }

    #[test]
    fn vanilla_jacobians_at_origin_are_the_raw_weights() {
        // At h = 0 with zero bias, tanh'(0) = 1, so the linearization is the
        // weight matrix itself.
        let mut p = zero_params(&ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 2,
            hidden_dim: 3,
            vocab_size: 4,
            n_classes: 2,
            seed: 0,
        });
        if let CellWeights::Vanilla { w_x, w_h, .. } = &mut p.cell {
            for (k, v) in w_h.data_mut().iter_mut().enumerate() {
                *v = 0.1 * (k as f64 + 1.0);
            }
            for (k, v) in w_x.data_mut().iter_mut().enumerate() {
                *v = -0.2 * (k as f64 + 1.0);
            }
        }
        let state = vec![0.0; 3];
        let jr = recurrent_jacobian(&p, &state);
        let ji = input_jacobian(&p, &state);
        if let CellWeights::Vanilla { w_x, w_h, .. } = &p.cell {
            assert_eq!(&jr, w_h);
            assert_eq!(&ji, w_x);
        }
    }

    #[test]
    fn zero_weight_vanilla_jacobian_is_zero() {
        let p: ModelParams<f64> = zero_params(&ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 2,
            hidden_dim: 3,
            vocab_size: 4,
            n_classes: 2,
            seed: 0,
        });
        let jr = recurrent_jacobian(&p, &[0.3, -0.2, 0.5]);
        assert!(jr.data().iter().all(|&v| v == 0.0));
        let ji = input_jacobian(&p, &[0.3, -0.2, 0.5]);
        assert!(ji.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn jacobians_match_finite_differences() {
        for cell in [CellType::Vanilla, CellType::Gru, CellType::Lstm] {
            let p: ModelParams<f64> = init_params(&ModelConfig {
                cell_type: cell,
                embed_dim: 3,
                hidden_dim: 4,
                vocab_size: 6,
                n_classes: 3,
                seed: 13,
            });
            let problem = SpeedProblem::new(&p);
            let dim = problem.state_dim();
            let state: Vec<f64> = (0..dim).map(|k| 0.4 * ((k as f64) - 1.3).cos()).collect();
            let delta = 1e-5;

            let jr = recurrent_jacobian(&p, &state);
            for col in 0..dim {
                let mut plus = state.clone();
                plus[col] += delta;
                let mut minus = state.clone();
                minus[col] -= delta;
                let fp = problem.map(&plus);
                let fm = problem.map(&minus);
                for row in 0..dim {
                    let fd = (fp[row] - fm[row]) / (2.0 * delta);
                    assert!(
                        (fd - jr[(row, col)]).abs() < 1e-6,
                        "{cell:?} J_rec[{row},{col}]"
                    );
                }
            }

            let m = p.config.embed_dim;
            let ji = input_jacobian(&p, &state);
            let s = CellState::from_flat(&p.config, &state);
            for col in 0..m {
                let mut xp = vec![0.0; m];
                xp[col] = delta;
                let mut xm = vec![0.0; m];
                xm[col] = -delta;
                let fp = crate::model::step_embedded(&p, &s, &xp).to_flat();
                let fm = crate::model::step_embedded(&p, &s, &xm).to_flat();
                for row in 0..dim {
                    let fd = (fp[row] - fm[row]) / (2.0 * delta);
                    assert!(
                        (fd - ji[(row, col)]).abs() < 1e-6,
                        "{cell:?} J_inp[{row},{col}]"
                    );
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let margin = 1e-3;
        let c = classify(
            &[
                Complex::new(0.5, 0.0),
                Complex::new(0.3, 0.2),
                Complex::new(0.3, -0.2),
            ],
            margin,
        );
        assert_eq!(c.kind, Stability::Stable);
        assert_eq!(c.index, 0);
        assert!(!c.marginal);

        let c = classify(&[Complex::new(1.5, 0.0), Complex::new(0.5, 0.0)], margin);
        assert_eq!(c.kind, Stability::Saddle);
        assert_eq!(c.index, 1);

        let c = classify(
            &[
                Complex::new(1.5, 0.0),
                Complex::new(1.2, 0.0),
                Complex::new(0.5, 0.0),
            ],
            margin,
        );
        assert_eq!(c.kind, Stability::Saddle);
        assert_eq!(c.index, 2);

        let c = classify(&[Complex::new(2.0, 0.0), Complex::new(1.5, 0.0)], margin);
        assert_eq!(c.kind, Stability::Unstable);

        let c = classify(&[Complex::new(1.0005, 0.0), Complex::new(0.2, 0.0)], margin);
        assert!(c.marginal);
    }

    #[test]
    fn census_of_zero_weight_model_is_one_attractor_at_origin() {
        let p: ModelParams<f64> = zero_params(&ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 2,
            hidden_dim: 3,
            vocab_size: 4,
            n_classes: 2,
            seed: 0,
        });
        let ics: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![0.1 * i as f64 - 1.0, 0.05 * i as f64, -0.3])
            .collect();
        let census = find_fixed_points(&p, &ics, &FpConfig::default()).unwrap();
        assert_eq!(census.points.len(), 1);
        assert_eq!(census.n_stable(), 1);
        assert!(census.points[0].state.iter().all(|&v| v.abs() < 1e-6));
        assert_eq!(census.points[0].n_converged_ics, 20);
    }

    #[test]
    fn census_of_scalar_tanh_cell_finds_all_three_roots() {
        let p = scalar_tanh_cell(2.0);
        let ics: Vec<Vec<f64>> = (-10..=10).map(|i| vec![i as f64 * 0.2]).collect();
        let census = find_fixed_points(&p, &ics, &FpConfig::default()).unwrap();
        assert_eq!(census.points.len(), 3);
        assert_eq!(census.n_stable(), 2);
        assert_eq!(census.n_unstable(), 1);
        let root = tanh_root(2.0);
        let mut states: Vec<f64> = census.points.iter().map(|p| p.state[0]).collect();
        states.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((states[0] + root).abs() < 1e-6);
        assert!(states[1].abs() < 1e-8);
        assert!((states[2] - root).abs() < 1e-6);
        // The origin has derivative 2, the outer roots derivative < 1.
        for fp in &census.points {
            assert!(fp.q < 1e-8);
            if fp.state[0].abs() < 1e-6 {
                assert!((fp.eigenvalues[0].re - 2.0).abs() < 1e-9);
            } else {
                assert!(fp.eigenvalues[0].norm() < 1.0);
            }
        }
    }

    #[test]
    fn radii_groups_report_mean_and_population_std() {
        use crate::statespace::fit_pca;
        // Identity-like PCA over 4-D points.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sample = Matrix::from_fn(40, 4, |_, _| rng.random_range(-1.0..1.0));
        let pca = fit_pca(&sample).unwrap();

        let mk = |state: Vec<f64>, index: usize| FixedPoint {
            state,
            q: 0.0,
            jacobian: Matrix::identity(4),
            eigenvalues: vec![],
            eigenvectors: None,
            kind: if index == 0 {
                Stability::Stable
            } else {
                Stability::Saddle
            },
            index,
            marginal: false,
            n_converged_ics: 1,
        };
        let points = vec![
            mk(vec![1.0, 0.0, 0.0, 0.0], 0),
            mk(vec![0.0, 2.0, 0.0, 0.0], 0),
            mk(vec![0.0, 0.0, 0.5, 0.0], 1),
        ];
        let groups = fp_radii(&points, &pca).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].index, 0);
        assert_eq!(groups[0].count, 2);
        assert_eq!(groups[1].count, 1);
        assert_eq!(groups[1].r_std, 0.0); // single-member group
    }
}
