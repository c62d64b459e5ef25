//! Model checkpoint file: one JSON header line (config, label set, split
//! spec, vocabulary) followed by named CSV tensor blocks. Floats are written
//! with 17 significant digits so a save/load cycle is bit-exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{LabelSet, SplitSpec, Vocab};
use crate::numerics::format_full;
use crate::scalar::Scalar;

use super::{zero_params, ModelConfig, ModelParams};

pub const FORMAT_NAME: &str = "rnnscope-checkpoint";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed checkpoint: {0}")]
    Malformed(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    config: ModelConfig,
    labels: Vec<String>,
    split: SplitSpec,
    vocab: Vec<String>,
}

/// A loaded checkpoint: the parameters plus everything needed to rebuild the
/// evaluation context (labels, split, vocabulary).
#[derive(Debug, Clone)]
pub struct Checkpoint<F> {
    pub params: ModelParams<F>,
    pub labels: LabelSet,
    pub split: SplitSpec,
    pub vocab: Vocab,
}

pub fn save_checkpoint<F: Scalar>(
    path: &Path,
    params: &ModelParams<F>,
    labels: &LabelSet,
    split: &SplitSpec,
    vocab: &Vocab,
) -> Result<(), CheckpointError> {
    let header = Header {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        config: params.config,
        labels: labels.names().to_vec(),
        split: *split,
        vocab: vocab.tokens().to_vec(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for (name, tensor, _) in params.tensors() {
        out.push_str(&format!("tensor {name} {} {}\n", tensor.rows(), tensor.cols()));
        for i in 0..tensor.rows() {
            for (j, v) in tensor.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format_full(*v));
            }
            out.push('\n');
        }
    }
    out.push_str("end\n");
    fs::write(path, out).map_err(|source| CheckpointError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_checkpoint<F: Scalar>(path: &Path) -> Result<Checkpoint<F>, CheckpointError> {
    let text = fs::read_to_string(path).map_err(|source| CheckpointError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = text.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| CheckpointError::Malformed("empty file".to_string()))?;
    let header: Header = serde_json::from_str(header_line)
        .map_err(|e| CheckpointError::Malformed(format!("header: {e}")))?;
    if header.format != FORMAT_NAME {
        return Err(CheckpointError::Malformed(format!(
            "unexpected format {:?}",
            header.format
        )));
    }
    if header.version != FORMAT_VERSION {
        return Err(CheckpointError::Malformed(format!(
            "unsupported version {}",
            header.version
        )));
    }

    // Parse every tensor block first, then fill the model in one pass.
    let mut blocks: Vec<(String, usize, usize, Vec<f64>)> = Vec::new();
    loop {
        let line = lines
            .next()
            .ok_or_else(|| CheckpointError::Malformed("missing end marker".to_string()))?;
        if line == "end" {
            break;
        }
        let mut parts = line.split_whitespace();
        let (kw, name, rows, cols) = (
            parts.next(),
            parts.next(),
            parts.next().and_then(|s| s.parse::<usize>().ok()),
            parts.next().and_then(|s| s.parse::<usize>().ok()),
        );
        let (Some("tensor"), Some(name), Some(rows), Some(cols)) = (kw, name, rows, cols) else {
            return Err(CheckpointError::Malformed(format!(
                "expected tensor block, got {line:?}"
            )));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let line = lines.next().ok_or_else(|| {
                CheckpointError::Malformed(format!("tensor {name} truncated at row {i}"))
            })?;
            for tok in line.split(',') {
                let v: f64 = tok.trim().parse().map_err(|_| {
                    CheckpointError::Malformed(format!("tensor {name} row {i}: bad value {tok:?}"))
                })?;
                data.push(v);
            }
            if data.len() != (i + 1) * cols {
                return Err(CheckpointError::Malformed(format!(
                    "tensor {name} row {i} has the wrong number of columns"
                )));
            }
        }
        blocks.push((name.to_string(), rows, cols, data));
    }

    let mut params = zero_params::<F>(&header.config);
    let expected = params.tensors().len();
    if blocks.len() != expected {
        return Err(CheckpointError::Malformed(format!(
            "checkpoint has {} tensors, model needs {expected}",
            blocks.len()
        )));
    }
    for (name, tensor, _) in params.tensors_mut() {
        let Some((_, rows, cols, data)) = blocks.iter().find(|(n, _, _, _)| n == name) else {
            return Err(CheckpointError::Malformed(format!(
                "checkpoint is missing tensor {name}"
            )));
        };
        if tensor.rows() != *rows || tensor.cols() != *cols {
            return Err(CheckpointError::Malformed(format!(
                "tensor {name} has shape {}x{}, file says {rows}x{cols}",
                tensor.rows(),
                tensor.cols()
            )));
        }
        for (slot, &v) in tensor.data_mut().iter_mut().zip(data) {
            *slot = F::of(v);
        }
    }

    Ok(Checkpoint {
        params,
        labels: LabelSet::from_names(header.labels),
        split: header.split,
        vocab: Vocab::from_tokens(header.vocab),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocab, Utterance};
    use crate::model::{init_params, CellType};

    fn fixture() -> (ModelParams<f64>, LabelSet, SplitSpec, Vocab) {
        let vocab = build_vocab(
            &[Utterance {
                text: "alpha beta gamma delta".to_string(),
                intent: "X".to_string(),
            }],
            10,
        )
        .unwrap();
        let config = ModelConfig {
            cell_type: CellType::Lstm,
            embed_dim: 3,
            hidden_dim: 4,
            vocab_size: vocab.size(),
            n_classes: 7,
            seed: 99,
        };
        let labels = LabelSet::from_names(
            (0..7).map(|i| format!("intent_{i}")).collect::<Vec<_>>(),
        );
        (init_params(&config), labels, SplitSpec::with_seed(5), vocab)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (params, labels, split, vocab) = fixture();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        save_checkpoint(&path, &params, &labels, &split, &vocab).unwrap();
        let loaded: Checkpoint<f64> = load_checkpoint(&path).unwrap();
        assert_eq!(loaded.params, params);
        assert_eq!(loaded.labels, labels);
        assert_eq!(loaded.split, split);
        assert_eq!(loaded.vocab.tokens(), vocab.tokens());
        // Saving the loaded model reproduces the file byte for byte.
        let path2 = dir.path().join("model2.ckpt");
        save_checkpoint(&path2, &loaded.params, &loaded.labels, &loaded.split, &loaded.vocab)
            .unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
    }

    #[test]
    fn truncated_file_is_rejected() {
        let (params, labels, split, vocab) = fixture();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        save_checkpoint(&path, &params, &labels, &split, &vocab).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let cut: String = text.lines().take(5).collect::<Vec<_>>().join("\n");
        fs::write(&path, cut).unwrap();
        assert!(load_checkpoint::<f64>(&path).is_err());
    }
}
