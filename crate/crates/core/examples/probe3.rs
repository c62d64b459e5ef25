//! GRU(e:10,h:10) probe: dimensionality, census, radii.

use std::time::Instant;

use rnnscope_core::corpus::{build_vocab, encode_examples, split, LabelSet, SplitSpec};
use rnnscope_core::fixedpoints::{fp_census, fp_radii, FpConfig};
use rnnscope_core::model::{CellType, ModelConfig};
use rnnscope_core::statespace::{collect_states, fit_pca, intrinsic_dim, CollectMode};
use rnnscope_core::train::{evaluate, train, TrainConfig};

fn main() {
    let data = rnnscope_core::corpus::synth::generate(1);
    let labels = LabelSet::from_utterances(&data);
    let splits = split(&data, &SplitSpec::with_seed(1)).unwrap();
    let vocab = build_vocab(&splits.train, 1000).unwrap();
    let (train_set, _) = encode_examples(&splits.train, &vocab, &labels);
    let (val_set, _) = encode_examples(&splits.val, &vocab, &labels);
    let (test_set, _) = encode_examples(&splits.test, &vocab, &labels);

    for seed in [1u64, 2] {
        let cfg = ModelConfig {
            cell_type: CellType::Gru,
            embed_dim: 10,
            hidden_dim: 10,
            vocab_size: vocab.size(),
            n_classes: labels.len(),
            seed,
        };
        let tc = TrainConfig { seed, ..Default::default() };
        let t = Instant::now();
        let (params, history) = train::<f64>(&cfg, &tc, &train_set, &val_set).unwrap();
        let acc = evaluate(&params, &test_set).unwrap();
        println!("gru10 seed {seed}: {} epochs, test acc {:.4}, {:?}", history.stopped_epoch, acc, t.elapsed());

        let sample = collect_states(&params, &test_set, CollectMode::All).unwrap();
        let pca = fit_pca(&sample.data).unwrap();
        let dim = intrinsic_dim(&pca, 0.95).unwrap();
        println!("  d = {}", dim.d);

        let t = Instant::now();
        let census = fp_census(&params, &test_set, &FpConfig { seed: 1, ..Default::default() }).unwrap();
        println!(
            "  census: {} pts ({} stable, {} 1-idx, {} higher, {} unstable, {} marginal) {:?}",
            census.points.len(), census.n_stable(), census.n_one_index(),
            census.n_higher_index(), census.n_unstable(), census.marginal.len(), t.elapsed()
        );
        let radii = fp_radii(&census.points, &pca).unwrap();
        for g in &radii {
            println!("  radii idx {}: n {} r {:.3} +- {:.3}", g.index, g.count, g.r_mean, g.r_std);
        }
    }
}
