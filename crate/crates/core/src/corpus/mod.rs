//! Dataset ingestion, vocabulary construction, tokenization and splits.
//!
//! The canonical on-disk form is JSON-lines, one `{"text": ..., "intent":
//! ...}` object per line. The published per-intent distribution can be
//! normalized into that form with [`load_snips_tree`]; a deterministic
//! generator for a dataset of the same shape lives in [`synth`].

pub mod synth;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of intent classes in the reference dataset.
pub const EXPECTED_CLASSES: usize = 7;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("text is empty after normalization")]
    EmptyText,
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {min} samples to split, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("invalid split fraction {value} (must be in (0,1))")]
    BadFraction { value: f64 },
    #[error("no utterances found under {path}")]
    EmptyTree { path: String },
}

/// One labeled natural-language query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub text: String,
    pub intent: String,
}

/// Distinct intent labels in first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    names: Vec<String>,
}

impl LabelSet {
    pub fn from_utterances(data: &[Utterance]) -> Self {
        let mut names = Vec::new();
        for u in data {
            if !names.iter().any(|n| n == &u.intent) {
                names.push(u.intent.clone());
            }
        }
        LabelSet { names }
    }

    pub fn from_names(names: Vec<String>) -> Self {
        LabelSet { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A loaded dataset plus the label set discovered while reading it.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub utterances: Vec<Utterance>,
    pub labels: LabelSet,
    /// Non-fatal observations (e.g. unexpected label-set size).
    pub warnings: Vec<String>,
}

/// Reads a JSON-lines corpus file, preserving record order.
pub fn load_dataset(path: &Path) -> Result<Corpus, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut utterances = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let u: Utterance =
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedLine {
                line: i + 1,
                reason: e.to_string(),
            })?;
        if u.text.trim().is_empty() {
            return Err(CorpusError::MalformedLine {
                line: i + 1,
                reason: "empty text".to_string(),
            });
        }
        utterances.push(u);
    }
    if utterances.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let labels = LabelSet::from_utterances(&utterances);
    let mut warnings = Vec::new();
    if labels.len() != EXPECTED_CLASSES {
        warnings.push(format!(
            "expected {} intent labels, found {}",
            EXPECTED_CLASSES,
            labels.len()
        ));
    }
    Ok(Corpus {
        utterances,
        labels,
        warnings,
    })
}

/// Serializes utterances to the JSON-lines form.
pub fn to_jsonl(data: &[Utterance]) -> String {
    let mut out = String::new();
    for u in data {
        out.push_str(&serde_json::to_string(u).expect("utterance serializes"));
        out.push('\n');
    }
    out
}

/// Normalizes the published per-intent JSON tree: each file maps an intent
/// name to a list of samples whose `data` chunks concatenate to the query
/// text. Files are visited in sorted order so re-runs are byte-identical.
pub fn load_snips_tree(dir: &Path) -> Result<Vec<Utterance>, CorpusError> {
    #[derive(Deserialize)]
    struct Chunk {
        text: String,
    }
    #[derive(Deserialize)]
    struct Sample {
        data: Vec<Chunk>,
    }

    let mut files = Vec::new();
    collect_json_files(dir, &mut files)?;
    files.sort();

    let mut out = Vec::new();
    for file in &files {
        let raw = fs::read_to_string(file).map_err(|source| CorpusError::Io {
            path: file.display().to_string(),
            source,
        })?;
        let parsed: HashMap<String, Vec<Sample>> =
            serde_json::from_str(&raw).map_err(|e| CorpusError::MalformedLine {
                line: 0,
                reason: format!("{}: {e}", file.display()),
            })?;
        let mut intents: Vec<&String> = parsed.keys().collect();
        intents.sort();
        for intent in intents {
            for sample in &parsed[intent] {
                let text: String = sample.data.iter().map(|c| c.text.as_str()).collect();
                let text = text.split_whitespace().collect::<Vec<_>>().join(" ");
                if !text.is_empty() {
                    out.push(Utterance {
                        text,
                        intent: intent.clone(),
                    });
                }
            }
        }
    }
    if out.is_empty() {
        return Err(CorpusError::EmptyTree {
            path: dir.display().to_string(),
        });
    }
    Ok(out)
}

fn collect_json_files(dir: &Path, out: &mut Vec<std::path::PathBuf>) -> Result<(), CorpusError> {
    let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for entry in entries {
        let entry = entry.map_err(|source| CorpusError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let path = entry.path();
        if path.is_dir() {
            collect_json_files(&path, out)?;
        } else if path.extension().and_then(|e| e.to_str()) == Some("json") {
            out.push(path);
        }
    }
    Ok(())
}

/// Per-label sample count and percentage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCount {
    pub label: String,
    pub count: usize,
    pub percent: f64,
}

/// Counts samples per label, in first-appearance order.
pub fn class_balance(data: &[Utterance]) -> Result<Vec<ClassCount>, CorpusError> {
    if data.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let labels = LabelSet::from_utterances(data);
    let mut counts = vec![0usize; labels.len()];
    for u in data {
        counts[labels.index_of(&u.intent).unwrap()] += 1;
    }
    let total = data.len() as f64;
    Ok(labels
        .names()
        .iter()
        .zip(&counts)
        .map(|(label, &count)| ClassCount {
            label: label.clone(),
            count,
            percent: 100.0 * count as f64 / total,
        })
        .collect())
}

/// Frequency-truncated vocabulary with two reserved ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocab {
    tokens: Vec<String>,
    #[serde(skip)]
    ids: HashMap<String, usize>,
}

impl Vocab {
    /// Reserved id 0; never produced by tokenization.
    pub const PAD_ID: usize = 0;
    /// Reserved id 1; assigned to every out-of-vocabulary token.
    pub const OOV_ID: usize = 1;

    pub const PAD_TOKEN: &'static str = "<pad>";
    pub const OOV_TOKEN: &'static str = "<oov>";

    fn from_content(content: Vec<String>) -> Self {
        let mut tokens = Vec::with_capacity(content.len() + 2);
        tokens.push(Self::PAD_TOKEN.to_string());
        tokens.push(Self::OOV_TOKEN.to_string());
        tokens.extend(content);
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocab { tokens, ids }
    }

    /// Rebuilds the lookup table after deserialization.
    pub fn from_tokens(tokens: Vec<String>) -> Self {
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocab { tokens, ids }
    }

    pub fn size(&self) -> usize {
        self.tokens.len()
    }

    pub fn id(&self, token: &str) -> usize {
        self.ids.get(token).copied().unwrap_or(Self::OOV_ID)
    }

    pub fn token(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Two-column dump, `token<TAB>id`, one row per vocabulary entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            out.push_str(t);
            out.push('\t');
            out.push_str(&i.to_string());
            out.push('\n');
        }
        out
    }
}

/// Lowercases, maps punctuation to spaces and splits on whitespace.
///
/// This normalization is intentionally frozen: lowercase first, then every
/// non-alphanumeric character becomes a space.
pub fn normalize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect::<String>()
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

/// Builds a vocabulary from the most frequent `max_content` training tokens.
/// Frequency ties are broken by earlier first occurrence in corpus order.
pub fn build_vocab(train: &[Utterance], max_content: usize) -> Result<Vocab, CorpusError> {
    if train.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let mut freq: HashMap<String, (usize, usize)> = HashMap::new(); // token -> (count, first_seen)
    let mut seen = 0usize;
    for u in train {
        for tok in normalize(&u.text) {
            let entry = freq.entry(tok).or_insert((0, seen));
            entry.0 += 1;
            seen += 1;
        }
    }
    let mut ranked: Vec<(String, (usize, usize))> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)));
    ranked.truncate(max_content);
    Ok(Vocab::from_content(
        ranked.into_iter().map(|(t, _)| t).collect(),
    ))
}

/// Sequence of vocabulary ids for one utterance; never padded or truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSeq {
    pub ids: Vec<usize>,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Maps text to vocabulary ids; unknown tokens become [`Vocab::OOV_ID`].
pub fn tokenize(text: &str, vocab: &Vocab) -> Result<TokenSeq, CorpusError> {
    let toks = normalize(text);
    if toks.is_empty() {
        return Err(CorpusError::EmptyText);
    }
    Ok(TokenSeq {
        ids: toks.iter().map(|t| vocab.id(t)).collect(),
    })
}

/// A tokenized sentence paired with its label index.
pub type Example = (TokenSeq, usize);

/// Tokenizes a labeled subset against a vocabulary and label set. Utterances
/// that normalize to nothing (or carry an unknown label) are dropped; the
/// second return value counts them.
pub fn encode_examples(
    data: &[Utterance],
    vocab: &Vocab,
    labels: &LabelSet,
) -> (Vec<Example>, usize) {
    let mut out = Vec::with_capacity(data.len());
    let mut skipped = 0usize;
    for u in data {
        match (tokenize(&u.text, vocab), labels.index_of(&u.intent)) {
            (Ok(seq), Some(label)) => out.push((seq, label)),
            _ => skipped += 1,
        }
    }
    (out, skipped)
}

/// Deterministic partition parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub seed: u64,
    pub test_fraction: f64,
    pub val_fraction_of_train: f64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            seed: 0,
            test_fraction: 0.20,
            val_fraction_of_train: 0.20,
        }
    }
}

impl SplitSpec {
    pub fn with_seed(seed: u64) -> Self {
        SplitSpec {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Splits {
    pub train: Vec<Utterance>,
    pub val: Vec<Utterance>,
    pub test: Vec<Utterance>,
}

/// Shuffles once with the spec seed, then slices: the first
/// `floor(test_fraction * n)` records become the test set, the next
/// `floor(val_fraction * remainder)` the validation set, the rest training.
pub fn split(data: &[Utterance], spec: &SplitSpec) -> Result<Splits, CorpusError> {
    for f in [spec.test_fraction, spec.val_fraction_of_train] {
        if !(f > 0.0 && f < 1.0) {
            return Err(CorpusError::BadFraction { value: f });
        }
    }
    if data.len() < 5 {
        return Err(CorpusError::TooFewSamples {
            min: 5,
            got: data.len(),
        });
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    order.shuffle(&mut rng);

    let n = data.len();
    let n_test = (spec.test_fraction * n as f64).floor() as usize;
    let n_train_full = n - n_test;
    let n_val = (spec.val_fraction_of_train * n_train_full as f64).floor() as usize;

    let pick = |idx: &[usize]| idx.iter().map(|&i| data[i].clone()).collect::<Vec<_>>();
    Ok(Splits {
        test: pick(&order[..n_test]),
        val: pick(&order[n_test..n_test + n_val]),
        train: pick(&order[n_test + n_val..]),
    })
}
