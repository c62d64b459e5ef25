//! Recurrent architectures (vanilla, GRU, LSTM) with a trainable embedding
//! and an affine readout, exposing full hidden-state trajectories.
//!
//! The recurrence is `h_t = F(h_{t-1}, x_t)` with `x_t` the embedding of
//! token `t`; logits are the affine projection `W h_T + b` of the final
//! hidden state. `W` is `n_classes x hidden_dim`, so each class owns one
//! readout row.

pub mod cells;
pub mod checkpoint;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::TokenSeq;
use crate::numerics::Matrix;
use crate::scalar::Scalar;

pub use cells::{
    input_jacobian, state_jacobian, step_backward, step_embedded, step_embedded_cached,
    StateCotangent, StepCache,
};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("token id {id} out of range for vocabulary of {vocab} entries")]
    TokenOutOfRange { id: usize, vocab: usize },
    #[error("empty token sequence")]
    EmptySequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellType {
    Vanilla,
    Gru,
    Lstm,
}

impl CellType {
    pub fn name(self) -> &'static str {
        match self {
            CellType::Vanilla => "vanilla",
            CellType::Gru => "gru",
            CellType::Lstm => "lstm",
        }
    }
}

impl std::str::FromStr for CellType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vanilla" | "rnn" | "simple" => Ok(CellType::Vanilla),
            "gru" => Ok(CellType::Gru),
            "lstm" => Ok(CellType::Lstm),
            other => Err(format!("unknown cell type {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub cell_type: CellType,
    pub embed_dim: usize,
    pub hidden_dim: usize,
    pub vocab_size: usize,
    pub n_classes: usize,
    pub seed: u64,
}

impl ModelConfig {
    /// Dimension of the dynamical state: `hidden_dim` for vanilla and GRU,
    /// `2 * hidden_dim` for the LSTM whose update also reads the cell vector.
    pub fn state_dim(&self) -> usize {
        match self.cell_type {
            CellType::Lstm => 2 * self.hidden_dim,
            _ => self.hidden_dim,
        }
    }
}

/// Per-cell weight tensors. Input weights are `hidden_dim x embed_dim`,
/// recurrent weights `hidden_dim x hidden_dim`, biases `1 x hidden_dim`.
#[derive(Debug, Clone, PartialEq)]
pub enum CellWeights<F> {
    Vanilla {
        w_x: Matrix<F>,
        w_h: Matrix<F>,
        b: Matrix<F>,
    },
    Gru {
        w_z: Matrix<F>,
        u_z: Matrix<F>,
        b_z: Matrix<F>,
        w_r: Matrix<F>,
        u_r: Matrix<F>,
        b_r: Matrix<F>,
        w_g: Matrix<F>,
        u_g: Matrix<F>,
        b_g: Matrix<F>,
    },
    Lstm {
        w_i: Matrix<F>,
        u_i: Matrix<F>,
        b_i: Matrix<F>,
        w_f: Matrix<F>,
        u_f: Matrix<F>,
        b_f: Matrix<F>,
        w_o: Matrix<F>,
        u_o: Matrix<F>,
        b_o: Matrix<F>,
        w_g: Matrix<F>,
        u_g: Matrix<F>,
        b_g: Matrix<F>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    Weight,
    Bias,
}

/// All trainable tensors of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<F> {
    pub config: ModelConfig,
    /// Embedding table, `vocab_size x embed_dim`; row 0 backs the reserved
    /// padding id, which tokenization never emits.
    pub embedding: Matrix<F>,
    pub cell: CellWeights<F>,
    /// Readout matrix, `n_classes x hidden_dim`; rows are the readout vectors.
    pub w_out: Matrix<F>,
    /// Readout bias, `1 x n_classes`.
    pub b_out: Matrix<F>,
}

/// State carried between steps; `c` is present only for the LSTM.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState<F> {
    pub h: Vec<F>,
    pub c: Option<Vec<F>>,
}

impl<F: Scalar> CellState<F> {
    /// `h_0 = 0` (and `c_0 = 0`): all sentences start from the same state.
    pub fn initial(config: &ModelConfig) -> Self {
        CellState {
            h: vec![F::zero(); config.hidden_dim],
            c: match config.cell_type {
                CellType::Lstm => Some(vec![F::zero(); config.hidden_dim]),
                _ => None,
            },
        }
    }

    /// Dynamical-state vector: `h`, or `(h, c)` stacked for the LSTM.
    pub fn to_flat(&self) -> Vec<F> {
        let mut v = self.h.clone();
        if let Some(c) = &self.c {
            v.extend_from_slice(c);
        }
        v
    }

    pub fn from_flat(config: &ModelConfig, flat: &[F]) -> Self {
        let n = config.hidden_dim;
        match config.cell_type {
            CellType::Lstm => CellState {
                h: flat[..n].to_vec(),
                c: Some(flat[n..2 * n].to_vec()),
            },
            _ => CellState {
                h: flat[..n].to_vec(),
                c: None,
            },
        }
    }
}

/// The sequence of states visited by one sentence; `states[0]` is the shared
/// initial state, `states[t]` the state after consuming token `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenTrajectory<F> {
    pub states: Vec<Vec<F>>,
    /// LSTM cell vectors aligned with `states`; `None` otherwise.
    pub cell_states: Option<Vec<Vec<F>>>,
    pub tokens: Vec<usize>,
}

impl<F: Scalar> HiddenTrajectory<F> {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Stacked `(h, c)` vector at step `t` for the LSTM, plain `h` otherwise.
    pub fn flat_state(&self, t: usize) -> Vec<F> {
        let mut v = self.states[t].clone();
        if let Some(cs) = &self.cell_states {
            v.extend_from_slice(&cs[t]);
        }
        v
    }
}

impl<F: Scalar> ModelParams<F> {
    /// Tensors in a fixed order; initialization draws and optimizer moments
    /// follow this order, which makes runs reproducible.
    pub fn tensors(&self) -> Vec<(&'static str, &Matrix<F>, TensorKind)> {
        use TensorKind::{Bias, Weight};
        let mut out: Vec<(&'static str, &Matrix<F>, TensorKind)> =
            vec![("embedding", &self.embedding, Weight)];
        match &self.cell {
            CellWeights::Vanilla { w_x, w_h, b } => {
                out.push(("cell.w_x", w_x, Weight));
                out.push(("cell.w_h", w_h, Weight));
                out.push(("cell.b", b, Bias));
            }
            CellWeights::Gru {
                w_z,
                u_z,
                b_z,
                w_r,
                u_r,
                b_r,
                w_g,
                u_g,
                b_g,
            } => {
                out.push(("cell.w_z", w_z, Weight));
                out.push(("cell.u_z", u_z, Weight));
                out.push(("cell.b_z", b_z, Bias));
                out.push(("cell.w_r", w_r, Weight));
                out.push(("cell.u_r", u_r, Weight));
                out.push(("cell.b_r", b_r, Bias));
                out.push(("cell.w_g", w_g, Weight));
                out.push(("cell.u_g", u_g, Weight));
                out.push(("cell.b_g", b_g, Bias));
            }
            CellWeights::Lstm {
                w_i,
                u_i,
                b_i,
                w_f,
                u_f,
                b_f,
                w_o,
                u_o,
                b_o,
                w_g,
                u_g,
                b_g,
            } => {
                out.push(("cell.w_i", w_i, Weight));
                out.push(("cell.u_i", u_i, Weight));
                out.push(("cell.b_i", b_i, Bias));
                out.push(("cell.w_f", w_f, Weight));
                out.push(("cell.u_f", u_f, Weight));
                out.push(("cell.b_f", b_f, Bias));
                out.push(("cell.w_o", w_o, Weight));
                out.push(("cell.u_o", u_o, Weight));
                out.push(("cell.b_o", b_o, Bias));
                out.push(("cell.w_g", w_g, Weight));
                out.push(("cell.u_g", u_g, Weight));
                out.push(("cell.b_g", b_g, Bias));
            }
        }
        out.push(("readout.w", &self.w_out, Weight));
        out.push(("readout.b", &self.b_out, Bias));
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(&'static str, &mut Matrix<F>, TensorKind)> {
        use TensorKind::{Bias, Weight};
        let mut out: Vec<(&'static str, &mut Matrix<F>, TensorKind)> =
            vec![("embedding", &mut self.embedding, Weight)];
        match &mut self.cell {
            CellWeights::Vanilla { w_x, w_h, b } => {
                out.push(("cell.w_x", w_x, Weight));
                out.push(("cell.w_h", w_h, Weight));
                out.push(("cell.b", b, Bias));
            }
            CellWeights::Gru {
                w_z,
                u_z,
                b_z,
                w_r,
                u_r,
                b_r,
                w_g,
                u_g,
                b_g,
            } => {
                out.push(("cell.w_z", w_z, Weight));
                out.push(("cell.u_z", u_z, Weight));
                out.push(("cell.b_z", b_z, Bias));
                out.push(("cell.w_r", w_r, Weight));
                out.push(("cell.u_r", u_r, Weight));
                out.push(("cell.b_r", b_r, Bias));
                out.push(("cell.w_g", w_g, Weight));
                out.push(("cell.u_g", u_g, Weight));
                out.push(("cell.b_g", b_g, Bias));
            }
            CellWeights::Lstm {
                w_i,
                u_i,
                b_i,
                w_f,
                u_f,
                b_f,
                w_o,
                u_o,
                b_o,
                w_g,
                u_g,
                b_g,
            } => {
                out.push(("cell.w_i", w_i, Weight));
                out.push(("cell.u_i", u_i, Weight));
                out.push(("cell.b_i", b_i, Bias));
                out.push(("cell.w_f", w_f, Weight));
                out.push(("cell.u_f", u_f, Weight));
                out.push(("cell.b_f", b_f, Bias));
                out.push(("cell.w_o", w_o, Weight));
                out.push(("cell.u_o", u_o, Weight));
                out.push(("cell.b_o", b_o, Bias));
                out.push(("cell.w_g", w_g, Weight));
                out.push(("cell.u_g", u_g, Weight));
                out.push(("cell.b_g", b_g, Bias));
            }
        }
        out.push(("readout.w", &mut self.w_out, Weight));
        out.push(("readout.b", &mut self.b_out, Bias));
        out
    }

    /// Same shapes, all zeros; the gradient container.
    pub fn zeros_like(&self) -> ModelParams<F> {
        let mut p = self.clone();
        for (_, t, _) in p.tensors_mut() {
            for v in t.data_mut() {
                *v = F::zero();
            }
        }
        p
    }

    /// Readout rows `r_i`, one per class.
    pub fn readout_rows(&self) -> Vec<Vec<F>> {
        (0..self.config.n_classes)
            .map(|i| self.w_out.row(i).to_vec())
            .collect()
    }
}

fn zero_cell<F: Scalar>(config: &ModelConfig) -> CellWeights<F> {
    let n = config.hidden_dim;
    let m = config.embed_dim;
    let w = || Matrix::zeros(n, m);
    let u = || Matrix::zeros(n, n);
    let b = || Matrix::zeros(1, n);
    match config.cell_type {
        CellType::Vanilla => CellWeights::Vanilla {
            w_x: w(),
            w_h: u(),
            b: b(),
        },
        CellType::Gru => CellWeights::Gru {
            w_z: w(),
            u_z: u(),
            b_z: b(),
            w_r: w(),
            u_r: u(),
            b_r: b(),
            w_g: w(),
            u_g: u(),
            b_g: b(),
        },
        CellType::Lstm => CellWeights::Lstm {
            w_i: w(),
            u_i: u(),
            b_i: b(),
            w_f: w(),
            u_f: u(),
            b_f: b(),
            w_o: w(),
            u_o: u(),
            b_o: b(),
            w_g: w(),
            u_g: u(),
            b_g: b(),
        },
    }
}

/// All-zero parameters with the shapes the config dictates.
pub fn zero_params<F: Scalar>(config: &ModelConfig) -> ModelParams<F> {
    ModelParams {
        config: *config,
        embedding: Matrix::zeros(config.vocab_size, config.embed_dim),
        cell: zero_cell(config),
        w_out: Matrix::zeros(config.n_classes, config.hidden_dim),
        b_out: Matrix::zeros(1, config.n_classes),
    }
}

/// Glorot-uniform initialization: every weight tensor is drawn uniform in
/// `[-L, L]` with `L = sqrt(6 / (rows + cols))`; biases start at zero.
/// Draws happen in `tensors()` order from a stream seeded by `config.seed`,
/// so the same seed yields bit-identical parameters.
pub fn init_params<F: Scalar>(config: &ModelConfig) -> ModelParams<F> {
    let mut params = zero_params(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for (_, tensor, kind) in params.tensors_mut() {
        if kind == TensorKind::Bias {
            continue;
        }
        let limit = (6.0 / (tensor.rows() + tensor.cols()) as f64).sqrt();
        for v in tensor.data_mut() {
            *v = F::of((rng.random::<f64>() * 2.0 - 1.0) * limit);
        }
    }
    params
}

/// One recurrence step on a token id.
pub fn step<F: Scalar>(
    params: &ModelParams<F>,
    state: &CellState<F>,
    token_id: usize,
) -> Result<CellState<F>, ModelError> {
    if token_id >= params.config.vocab_size {
        return Err(ModelError::TokenOutOfRange {
            id: token_id,
            vocab: params.config.vocab_size,
        });
    }
    Ok(cells::step_embedded(
        params,
        state,
        params.embedding.row(token_id),
    ))
}

/// Runs the recurrence from the shared initial state and projects the final
/// hidden state through the readout. Records every intermediate state.
pub fn forward<F: Scalar>(
    params: &ModelParams<F>,
    seq: &TokenSeq,
) -> Result<(HiddenTrajectory<F>, Vec<F>), ModelError> {
    if seq.is_empty() {
        return Err(ModelError::EmptySequence);
    }
    let mut state = CellState::initial(&params.config);
    let mut states = vec![state.h.clone()];
    let mut cell_states = state.c.as_ref().map(|c| vec![c.clone()]);
    for &tok in &seq.ids {
        state = step(params, &state, tok)?;
        states.push(state.h.clone());
        if let (Some(cs), Some(c)) = (cell_states.as_mut(), state.c.as_ref()) {
            cs.push(c.clone());
        }
    }
    let logits = readout(params, &state.h);
    Ok((
        HiddenTrajectory {
            states,
            cell_states,
            tokens: seq.ids.clone(),
        },
        logits,
    ))
}

/// `W h + b`.
pub fn readout<F: Scalar>(params: &ModelParams<F>, h: &[F]) -> Vec<F> {
    let mut logits = params.w_out.matvec(h);
    for (l, &b) in logits.iter_mut().zip(params.b_out.row(0)) {
        *l += b;
    }
    logits
}

/// Argmax over logits; ties break toward the lowest index.
pub fn predict<F: Scalar>(params: &ModelParams<F>, seq: &TokenSeq) -> Result<usize, ModelError> {
    let (_, logits) = forward(params, seq)?;
    Ok(argmax(&logits))
}

pub fn argmax<F: Scalar>(v: &[F]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(cell_type: CellType, seed: u64) -> ModelConfig {
        ModelConfig {
            cell_type,
            embed_dim: 4,
            hidden_dim: 5,
            vocab_size: 11,
            n_classes: 7,
            seed,
        }
    }

    fn seq(ids: &[usize]) -> TokenSeq {
        TokenSeq { ids: ids.to_vec() }
    }

    #[test]
    fn init_is_deterministic_in_seed() {
        for cell in [CellType::Vanilla, CellType::Gru, CellType::Lstm] {
            let a: ModelParams<f64> = init_params(&config(cell, 42));
            let b: ModelParams<f64> = init_params(&config(cell, 42));
            assert_eq!(a, b);
            let c: ModelParams<f64> = init_params(&config(cell, 43));
            assert_ne!(a, c);
        }
    }

    #[test]
    fn init_biases_are_zero() {
        let p: ModelParams<f64> = init_params(&config(CellType::Lstm, 1));
        for (name, t, kind) in p.tensors() {
            if kind == TensorKind::Bias {
                assert!(t.data().iter().all(|&v| v == 0.0), "bias {name} not zero");
            }
        }
    }

    #[test]
    fn init_weight_spread_matches_uniform_moments() {
        // Uniform on [-L, L] has standard deviation L / sqrt(3).
        let cfg = ModelConfig {
            cell_type: CellType::Vanilla,
            embed_dim: 100,
            hidden_dim: 100,
            vocab_size: 100,
            n_classes: 7,
            seed: 5,
        };
        let p: ModelParams<f64> = init_params(&cfg);
        let t = &p.embedding; // 100 x 100
        let limit = (6.0 / 200.0f64).sqrt();
        let mean: f64 = t.data().iter().sum::<f64>() / t.data().len() as f64;
        let var: f64 =
            t.data().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / t.data().len() as f64;
        let expected = limit / 3.0f64.sqrt();
        assert!((var.sqrt() - expected).abs() / expected < 0.2);
    }

    #[test]
    fn zero_weights_keep_state_at_zero() {
        for cell in [CellType::Vanilla, CellType::Gru, CellType::Lstm] {
            let p: ModelParams<f64> = zero_params(&config(cell, 0));
            let s0 = CellState::initial(&p.config);
            let s1 = step(&p, &s0, 3).unwrap();
            assert!(s1.h.iter().all(|&v| v == 0.0), "{cell:?} h");
            if let Some(c) = &s1.c {
                assert!(c.iter().all(|&v| v == 0.0), "{cell:?} c");
            }
        }
    }

    #[test]
    fn vanilla_states_stay_inside_unit_box() {
        let p: ModelParams<f64> = init_params(&config(CellType::Vanilla, 9));
        let (traj, _) = forward(&p, &seq(&[1, 2, 3, 4, 5, 6, 7])).unwrap();
        for h in traj.states.iter().skip(1) {
            assert!(h.iter().all(|&v| v.abs() < 1.0));
        }
    }

    #[test]
    fn forward_records_t_plus_one_states() {
        let p: ModelParams<f64> = init_params(&config(CellType::Gru, 3));
        let (traj, _) = forward(&p, &seq(&[1, 2, 3])).unwrap();
        assert_eq!(traj.states.len(), 4);
        assert!(traj.states[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_weights_make_logits_equal_bias() {
        let mut p: ModelParams<f64> = zero_params(&config(CellType::Gru, 0));
        for (k, v) in p.b_out.row_mut(0).iter_mut().enumerate() {
            *v = k as f64 * 0.5;
        }
        let (_, logits) = forward(&p, &seq(&[1, 2])).unwrap();
        for (k, &l) in logits.iter().enumerate() {
            assert_eq!(l, k as f64 * 0.5);
        }
    }

    #[test]
    fn trajectory_prefix_property() {
        for cell in [CellType::Vanilla, CellType::Gru, CellType::Lstm] {
            let p: ModelParams<f64> = init_params(&config(cell, 17));
            let full = forward(&p, &seq(&[5, 1, 9, 2, 7])).unwrap().0;
            let prefix = forward(&p, &seq(&[5, 1, 9])).unwrap().0;
            assert_eq!(&full.states[..4], &prefix.states[..]);
        }
    }

    #[test]
    fn readout_is_affine() {
        let p: ModelParams<f64> = init_params(&config(CellType::Gru, 2));
        let a = vec![0.1, -0.2, 0.3, 0.05, -0.4];
        let b = vec![-0.3, 0.1, 0.2, -0.1, 0.25];
        let ab: Vec<f64> = a.iter().zip(&b).map(|(&x, &y)| x + y).collect();
        let la = readout(&p, &a);
        let lb = readout(&p, &b);
        let lab = readout(&p, &ab);
        // logits(a + b) + bias = logits(a) + logits(b)
        for k in 0..7 {
            let bias = p.b_out.row(0)[k];
            assert!((lab[k] + bias - la[k] - lb[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn predict_breaks_ties_toward_lowest_index() {
        let p: ModelParams<f64> = zero_params(&config(CellType::Vanilla, 0));
        assert_eq!(predict(&p, &seq(&[1])).unwrap(), 0);
    }

    #[test]
    fn predict_follows_one_hot_bias() {
        let mut p: ModelParams<f64> = zero_params(&config(CellType::Vanilla, 0));
        p.b_out.row_mut(0)[3] = 1.0;
        assert_eq!(predict(&p, &seq(&[1, 2])).unwrap(), 3);
    }

    #[test]
    fn predict_matches_explicit_row_dot_products() {
        let p: ModelParams<f64> = init_params(&config(CellType::Gru, 21));
        let s = seq(&[3, 8, 1, 2]);
        let (traj, logits) = forward(&p, &s).unwrap();
        let h_t = traj.states.last().unwrap();
        for (i, row) in p.readout_rows().iter().enumerate() {
            let dot: f64 = row.iter().zip(h_t).map(|(&a, &b)| a * b).sum();
            assert!((dot + p.b_out.row(0)[i] - logits[i]).abs() < 1e-12);
        }
        assert_eq!(predict(&p, &s).unwrap(), argmax(&logits));
    }

    #[test]
    fn step_rejects_out_of_range_token() {
        let p: ModelParams<f64> = init_params(&config(CellType::Gru, 0));
        let s0 = CellState::initial(&p.config);
        assert!(matches!(
            step(&p, &s0, 11),
            Err(ModelError::TokenOutOfRange { .. })
        ));
    }

    #[test]
    fn forward_rejects_empty_sequence() {
        let p: ModelParams<f64> = init_params(&config(CellType::Gru, 0));
        assert!(matches!(
            forward(&p, &seq(&[])),
            Err(ModelError::EmptySequence)
        ));
    }

    #[test]
    fn gru_step_matches_scalar_loop_oracle() {
        // Independent re-implementation with explicit index loops.
        let cfg = ModelConfig {
            cell_type: CellType::Gru,
            embed_dim: 2,
            hidden_dim: 3,
            vocab_size: 5,
            n_classes: 7,
            seed: 33,
        };
        let p: ModelParams<f64> = init_params(&cfg);
        let h_prev = vec![0.2, -0.5, 0.7];
        let token = 2usize;
        let x = p.embedding.row(token).to_vec();

        let CellWeights::Gru {
            w_z,
            u_z,
            b_z,
            w_r,
            u_r,
            b_r,
            w_g,
            u_g,
            b_g,
        } = &p.cell
        else {
            unreachable!()
        };
        let sig = |v: f64| 1.0 / (1.0 + (-v).exp());
        let mut expected = vec![0.0; 3];
        let mut z = vec![0.0; 3];
        let mut r = vec![0.0; 3];
        for a in 0..3 {
            let mut az = b_z.row(0)[a];
            let mut ar = b_r.row(0)[a];
            for b in 0..2 {
                az += w_z[(a, b)] * x[b];
                ar += w_r[(a, b)] * x[b];
            }
            for b in 0..3 {
                az += u_z[(a, b)] * h_prev[b];
                ar += u_r[(a, b)] * h_prev[b];
            }
            z[a] = sig(az);
            r[a] = sig(ar);
        }
        for a in 0..3 {
            let mut ag = b_g.row(0)[a];
            for b in 0..2 {
                ag += w_g[(a, b)] * x[b];
            }
            for b in 0..3 {
                ag += u_g[(a, b)] * (r[b] * h_prev[b]);
            }
            expected[a] = (1.0 - z[a]) * h_prev[a] + z[a] * ag.tanh();
        }

        let got = step(
            &p,
            &CellState {
                h: h_prev,
                c: None,
            },
            token,
        )
        .unwrap();
        for a in 0..3 {
            assert!((got.h[a] - expected[a]).abs() < 1e-12);
        }
    }
}
