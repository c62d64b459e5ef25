//! Training: multiclass cross-entropy, full-length backpropagation through
//! time, Adam updates and early stopping on validation loss.
//!
//! Batches average per-sentence gradients; sentences are processed whole
//! (no padding or masking), so results are bit-reproducible for fixed seeds.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::TokenSeq;
pub use crate::corpus::Example;
use crate::model::{
    argmax, init_params, readout, step_backward, step_embedded_cached, CellState, ModelConfig,
    ModelError, ModelParams, StateCotangent, StepCache,
};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("logits contain non-finite values")]
    NonFiniteLogits,
    #[error("label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("empty batch")]
    EmptyBatch,
    #[error("empty dataset")]
    EmptyData,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Epochs without validation-loss improvement tolerated before stopping.
    pub patience: usize,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 5e-4,
            batch_size: 32,
            patience: 2,
            max_epochs: 50,
            seed: 0,
        }
    }
}

/// Numerically stable `-log softmax(logits)[label]`.
pub fn cross_entropy<F: Scalar>(logits: &[F], label: usize) -> Result<F, TrainError> {
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(TrainError::NonFiniteLogits);
    }
    if label >= logits.len() {
        return Err(TrainError::LabelOutOfRange {
            label,
            n_classes: logits.len(),
        });
    }
    let max = logits.iter().copied().fold(F::neg_infinity(), F::max);
    let log_sum: F = logits
        .iter()
        .map(|&l| (l - max).exp())
        .sum::<F>()
        .ln();
    Ok(log_sum - (logits[label] - max))
}

/// Softmax with max-subtraction stabilization.
pub fn softmax<F: Scalar>(logits: &[F]) -> Vec<F> {
    let max = logits.iter().copied().fold(F::neg_infinity(), F::max);
    let exps: Vec<F> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: F = exps.iter().copied().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Gradients of the mean batch loss with respect to every parameter tensor,
/// computed by full-length backpropagation through time. Returns the mean
/// loss alongside.
pub fn gradients<F: Scalar>(
    params: &ModelParams<F>,
    batch: &[(&TokenSeq, usize)],
) -> Result<(ModelParams<F>, F), TrainError> {
    if batch.is_empty() {
        return Err(TrainError::EmptyBatch);
    }
    let mut grads = params.zeros_like();
    let mut total_loss = F::zero();
    for &(seq, label) in batch {
        total_loss += backprop_sentence(params, seq, label, &mut grads)?;
    }
    let inv = F::one() / F::of(batch.len() as f64);
    for (_, tensor, _) in grads.tensors_mut() {
        for v in tensor.data_mut() {
            *v *= inv;
        }
    }
    Ok((grads, total_loss * inv))
}

/// Forward pass with caches, then one reverse sweep. Accumulates into
/// `grads` (unscaled) and returns the sentence loss.
fn backprop_sentence<F: Scalar>(
    params: &ModelParams<F>,
    seq: &TokenSeq,
    label: usize,
    grads: &mut ModelParams<F>,
) -> Result<F, TrainError> {
    if seq.is_empty() {
        return Err(TrainError::Model(ModelError::EmptySequence));
    }
    let mut state = CellState::initial(&params.config);
    let mut caches: Vec<(usize, StepCache<F>)> = Vec::with_capacity(seq.len());
    for &tok in &seq.ids {
        if tok >= params.config.vocab_size {
            return Err(TrainError::Model(ModelError::TokenOutOfRange {
                id: tok,
                vocab: params.config.vocab_size,
            }));
        }
        let (next, cache) = step_embedded_cached(params, &state, params.embedding.row(tok));
        caches.push((tok, cache));
        state = next;
    }
    let logits = readout(params, &state.h);
    let loss = cross_entropy(&logits, label)?;

    // d loss / d logits = softmax - onehot
    let mut dlogits = softmax(&logits);
    dlogits[label] -= F::one();

    grads.w_out.add_outer(&dlogits, &state.h);
    for (b, &d) in grads.b_out.row_mut(0).iter_mut().zip(&dlogits) {
        *b += d;
    }
    let mut cot = StateCotangent {
        dh: params.w_out.matvec_transposed(&dlogits),
        dc: state.c.as_ref().map(|c| vec![F::zero(); c.len()]),
    };
    for (tok, cache) in caches.iter().rev() {
        let (prev_cot, dx) = step_backward(params, cache, &cot, Some(grads));
        for (g, &d) in grads.embedding.row_mut(*tok).iter_mut().zip(&dx) {
            *g += d;
        }
        cot = prev_cot;
    }
    Ok(loss)
}

/// Adam accumulators, one moment pair per parameter tensor.
#[derive(Debug, Clone)]
pub struct AdamState<F> {
    m: Vec<Vec<F>>,
    v: Vec<Vec<F>>,
    pub step: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl<F: Scalar> AdamState<F> {
    pub fn new(params: &ModelParams<F>) -> Self {
        let shapes: Vec<usize> = params
            .tensors()
            .iter()
            .map(|(_, t, _)| t.data().len())
            .collect();
        AdamState {
            m: shapes.iter().map(|&n| vec![F::zero(); n]).collect(),
            v: shapes.iter().map(|&n| vec![F::zero(); n]).collect(),
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One bias-corrected Adam update over all tensors.
pub fn adam_step<F: Scalar>(
    state: &mut AdamState<F>,
    params: &mut ModelParams<F>,
    grads: &ModelParams<F>,
    learning_rate: f64,
) {
    state.step += 1;
    let t = state.step as i32;
    let b1 = F::of(state.beta1);
    let b2 = F::of(state.beta2);
    let eps = F::of(state.epsilon);
    let lr = F::of(learning_rate);
    let corr1 = F::one() - b1.powi(t);
    let corr2 = F::one() - b2.powi(t);

    let grad_tensors = grads.tensors();
    for (idx, (_, tensor, _)) in params.tensors_mut().into_iter().enumerate() {
        let g = grad_tensors[idx].1.data();
        let m = &mut state.m[idx];
        let v = &mut state.v[idx];
        for (k, p) in tensor.data_mut().iter_mut().enumerate() {
            m[k] = b1 * m[k] + (F::one() - b1) * g[k];
            v[k] = b2 * v[k] + (F::one() - b2) * g[k] * g[k];
            let m_hat = m[k] / corr1;
            let v_hat = v[k] / corr2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch at which training stopped (last epoch actually run).
    pub stopped_epoch: usize,
    /// Epoch whose parameters were returned.
    pub best_epoch: usize,
}

/// Validation-loss early stopping with best-epoch restoration.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    pub patience: usize,
    best_loss: f64,
    pub best_epoch: usize,
    bad_epochs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Improved,
    Wait,
    Stop,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> Self {
        EarlyStopping {
            patience,
            best_loss: f64::INFINITY,
            best_epoch: 0,
            bad_epochs: 0,
        }
    }

    pub fn observe(&mut self, epoch: usize, val_loss: f64) -> StopDecision {
        if val_loss < self.best_loss {
            self.best_loss = val_loss;
            self.best_epoch = epoch;
            self.bad_epochs = 0;
            StopDecision::Improved
        } else {
            self.bad_epochs += 1;
            if self.bad_epochs >= self.patience {
                StopDecision::Stop
            } else {
                StopDecision::Wait
            }
        }
    }
}

/// Per-epoch shuffle seed derived from the training seed.
fn epoch_seed(seed: u64, epoch: usize) -> u64 {
    seed ^ (epoch as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Full training loop: shuffled mini-batches, Adam, validation after each
/// epoch, early stopping on validation loss, best-epoch weights returned.
pub fn train<F: Scalar>(
    model_config: &ModelConfig,
    train_config: &TrainConfig,
    train_data: &[Example],
    val_data: &[Example],
) -> Result<(ModelParams<F>, TrainHistory), TrainError> {
    if train_data.is_empty() || val_data.is_empty() {
        return Err(TrainError::EmptyData);
    }
    let mut params = init_params::<F>(model_config);
    let mut adam = AdamState::new(&params);
    let mut stopper = EarlyStopping::new(train_config.patience);
    let mut best_params = params.clone();
    let mut history = TrainHistory {
        epochs: Vec::new(),
        stopped_epoch: 0,
        best_epoch: 0,
    };

    for epoch in 1..=train_config.max_epochs {
        let mut order: Vec<usize> = (0..train_data.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(epoch_seed(train_config.seed, epoch));
        order.shuffle(&mut rng);

        let mut loss_sum = 0.0;
        for chunk in order.chunks(train_config.batch_size) {
            let batch: Vec<(&TokenSeq, usize)> =
                chunk.iter().map(|&i| (&train_data[i].0, train_data[i].1)).collect();
            let (grads, batch_loss) = gradients(&params, &batch)?;
            adam_step(&mut adam, &mut params, &grads, train_config.learning_rate);
            loss_sum += batch_loss.to_f64_lossy() * batch.len() as f64;
        }
        let train_loss = loss_sum / train_data.len() as f64;
        let val_loss = mean_loss(&params, val_data)?.to_f64_lossy();
        let val_accuracy = evaluate(&params, val_data)?;
        history.epochs.push(EpochRecord {
            epoch,
            train_loss,
            val_loss,
            val_accuracy,
        });
        history.stopped_epoch = epoch;

        match stopper.observe(epoch, val_loss) {
            StopDecision::Improved => {
                best_params = params.clone();
            }
            StopDecision::Wait => {}
            StopDecision::Stop => break,
        }
    }
    history.best_epoch = stopper.best_epoch;
    Ok((best_params, history))
}

/// Mean cross-entropy over a dataset.
pub fn mean_loss<F: Scalar>(params: &ModelParams<F>, data: &[Example]) -> Result<F, TrainError> {
    if data.is_empty() {
        return Err(TrainError::EmptyData);
    }
    let mut total = F::zero();
    for (seq, label) in data {
        let (_, logits) = crate::model::forward(params, seq)?;
        total += cross_entropy(&logits, *label)?;
    }
    Ok(total / F::of(data.len() as f64))
}

/// Fraction of argmax-correct predictions.
pub fn evaluate<F: Scalar>(params: &ModelParams<F>, data: &[Example]) -> Result<f64, TrainError> {
    if data.is_empty() {
        return Err(TrainError::EmptyData);
    }
    let mut correct = 0usize;
    for (seq, label) in data {
        let (_, logits) = crate::model::forward(params, seq)?;
        if argmax(&logits) == *label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}
