//! Run configuration: a single TOML file with nested sections, every key
//! mirrored by a CLI flag (flags win).

use std::fs;
use std::path::{Path, PathBuf};

use rnnscope_core::fixedpoints::FpConfig;
use rnnscope_core::model::CellType;
use rnnscope_core::train::TrainConfig;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub fixedpoints: FpSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub corpus: Option<PathBuf>,
    pub split_seed: u64,
    pub max_vocab: usize,
}

impl Default for DataSection {
    fn default() -> Self {
        DataSection {
            corpus: None,
            split_seed: 1,
            max_vocab: 1000,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub cells: Vec<String>,
    pub embed_dims: Vec<usize>,
    pub hidden_dims: Vec<usize>,
    /// Seeds per grid cell: `seed_base..seed_base + seeds`.
    pub seeds: u64,
    pub seed_base: u64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            cells: vec!["gru".to_string()],
            embed_dims: vec![16],
            hidden_dims: vec![16],
            seeds: 10,
            seed_base: 1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub patience: usize,
    pub max_epochs: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = TrainConfig::default();
        TrainSection {
            learning_rate: d.learning_rate,
            batch_size: d.batch_size,
            patience: d.patience,
            max_epochs: d.max_epochs,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpSection {
    pub q_tolerance: f64,
    pub dedup_radius: f64,
    pub max_opt_iterations: usize,
    pub learning_rate: f64,
    pub lr_decay: f64,
    pub unit_circle_margin: f64,
    pub ic_count: usize,
    pub seed: u64,
}

impl Default for FpSection {
    fn default() -> Self {
        let d = FpConfig::default();
        FpSection {
            q_tolerance: d.q_tolerance,
            dedup_radius: d.dedup_radius,
            max_opt_iterations: d.max_opt_iterations,
            learning_rate: d.learning_rate,
            lr_decay: d.lr_decay,
            unit_circle_margin: d.unit_circle_margin,
            ic_count: d.ic_count,
            seed: d.seed,
        }
    }
}

impl FpSection {
    pub fn to_config(&self) -> FpConfig {
        FpConfig {
            q_tolerance: self.q_tolerance,
            dedup_radius: self.dedup_radius,
            max_opt_iterations: self.max_opt_iterations,
            learning_rate: self.learning_rate,
            lr_decay: self.lr_decay,
            unit_circle_margin: self.unit_circle_margin,
            ic_count: self.ic_count,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub variance_threshold: f64,
    pub kmeans_seed: u64,
    pub kmeans_restarts: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            variance_threshold: 0.95,
            kmeans_seed: 1,
            kmeans_restarts: 10,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub workers: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("runs"),
            workers: 1,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn cells(&self) -> Result<Vec<CellType>, CliError> {
        self.grid
            .cells
            .iter()
            .map(|c| {
                c.parse::<CellType>()
                    .map_err(|e| CliError::Config(format!("grid.cells: {e}")))
            })
            .collect()
    }

    pub fn seeds(&self) -> Vec<u64> {
        (self.grid.seed_base..self.grid.seed_base + self.grid.seeds).collect()
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            learning_rate: self.train.learning_rate,
            batch_size: self.train.batch_size,
            patience: self.train.patience,
            max_epochs: self.train.max_epochs,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.cells.is_empty()
            || self.grid.embed_dims.is_empty()
            || self.grid.hidden_dims.is_empty()
            || self.grid.seeds == 0
        {
            return Err(CliError::Config("grid must be non-empty".to_string()));
        }
        if self.train.batch_size == 0 || self.train.max_epochs == 0 {
            return Err(CliError::Config(
                "train.batch_size and train.max_epochs must be positive".to_string(),
            ));
        }
        Ok(())
    }
}
