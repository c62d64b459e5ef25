//! Development probe: end-to-end pipeline timings and headline numbers on
//! the bundled synthetic corpus.

use std::time::Instant;

use rnnscope_core::clusterkit::{cluster_purity, kmeans, match_readouts, silhouette};
use rnnscope_core::corpus::{build_vocab, encode_examples, split, LabelSet, SplitSpec};
use rnnscope_core::fixedpoints::{fp_census, fp_radii, FpConfig};
use rnnscope_core::model::{CellType, ModelConfig};
use rnnscope_core::numerics::Matrix;
use rnnscope_core::statespace::{collect_states, fit_pca, intrinsic_dim, CollectMode};
use rnnscope_core::train::{evaluate, train, TrainConfig};

fn main() {
    let t0 = Instant::now();
    let data = rnnscope_core::corpus::synth::generate(1);
    let labels = LabelSet::from_utterances(&data);
    let splits = split(&data, &SplitSpec::with_seed(1)).unwrap();
    let vocab = build_vocab(&splits.train, 1000).unwrap();
    let (train_set, s1) = encode_examples(&splits.train, &vocab, &labels);
    let (val_set, s2) = encode_examples(&splits.val, &vocab, &labels);
    let (test_set, s3) = encode_examples(&splits.test, &vocab, &labels);
    println!(
        "prep {:?}: train {} val {} test {} (skipped {})",
        t0.elapsed(),
        train_set.len(),
        val_set.len(),
        test_set.len(),
        s1 + s2 + s3
    );

    let mut best: Option<(f64, rnnscope_core::model::ModelParams<f64>)> = None;
    for seed in [1u64, 2, 3] {
        let cfg = ModelConfig {
            cell_type: CellType::Gru,
            embed_dim: 16,
            hidden_dim: 16,
            vocab_size: vocab.size(),
            n_classes: labels.len(),
            seed,
        };
        let tc = TrainConfig {
            seed,
            ..Default::default()
        };
        let t = Instant::now();
        let (params, history) = train::<f64>(&cfg, &tc, &train_set, &val_set).unwrap();
        let test_acc = evaluate(&params, &test_set).unwrap();
        let val_acc = history
            .epochs
            .iter()
            .find(|e| e.epoch == history.best_epoch)
            .map(|e| e.val_accuracy)
            .unwrap_or(0.0);
        println!(
            "seed {seed}: {} epochs (best {}), val acc {:.4}, test acc {:.4}, {:?}",
            history.stopped_epoch, history.best_epoch, val_acc, test_acc, t.elapsed()
        );
        if best.as_ref().map(|(a, _)| val_acc > *a).unwrap_or(true) {
            best = Some((val_acc, params));
        }
    }
    let (_, params) = best.unwrap();
    rnnscope_core::model::checkpoint::save_checkpoint(
        std::path::Path::new("/tmp/probe_gru16.ckpt"),
        &params,
        &labels,
        &SplitSpec::with_seed(1),
        &vocab,
    )
    .unwrap();

    let t = Instant::now();
    let sample = collect_states(&params, &test_set, CollectMode::All).unwrap();
    let pca = fit_pca(&sample.data).unwrap();
    let dim = intrinsic_dim(&pca, 0.95).unwrap();
    println!(
        "states {} rows; d = {} (cumulative head {:?}) {:?}",
        sample.data.rows(),
        dim.d,
        &dim.cumulative[..8.min(dim.cumulative.len())],
        t.elapsed()
    );

    let t = Instant::now();
    let finals = collect_states(&params, &test_set, CollectMode::FinalOnly).unwrap();
    let clusters = kmeans(&finals.data, 7, 1, 10).unwrap();
    let sil = silhouette(&finals.data, &clusters.assignments).unwrap();
    let labels_vec: Vec<usize> = finals.provenance.iter().map(|r| r.label).collect();
    let purity = cluster_purity(&clusters.assignments, &labels_vec, 7);
    println!(
        "final-state clusters: silhouette {:.4}, purity {:.4} {:?}",
        sil.score, purity, t.elapsed()
    );

    let readouts = Matrix::from_rows(&params.readout_rows());
    let origin = vec![0.0; 16];
    let align = match_readouts(&readouts, &clusters.centroids, &origin).unwrap();
    println!(
        "alignment mean {:.4} (suboptimal greedy: {}), ds mean {:.3} std {:.3} ratio {:.3}",
        align.alignment_mean,
        align.greedy_suboptimal,
        align.ds_mean,
        align.ds_std,
        align.ds_std / align.ds_mean
    );

    let t = Instant::now();
    let fp_cfg = FpConfig {
        seed: 1,
        ..Default::default()
    };
    let census = fp_census(&params, &test_set, &fp_cfg).unwrap();
    println!(
        "census: attempted {} converged {} -> {} points ({} stable, {} 1-index, {} higher, {} unstable, {} marginal) {:?}",
        census.attempted_ics,
        census.converged_ics,
        census.points.len(),
        census.n_stable(),
        census.n_one_index(),
        census.n_higher_index(),
        census.n_unstable(),
        census.marginal.len(),
        t.elapsed()
    );
    for p in &census.points {
        let top: Vec<f64> = p.eigenvalues.iter().take(3).map(|l| l.norm()).collect();
        println!(
            "  idx {} kind {:?} q {:.2e} hits {} |lambda| {:?}",
            p.index, p.kind, p.q, p.n_converged_ics, top
        );
    }
    let radii = fp_radii(&census.points, &pca).unwrap();
    for g in &radii {
        println!(
            "  radii idx {}: n {} r {:.3} +- {:.3} (r0 {:.3} +- {:.3})",
            g.index, g.count, g.r_mean, g.r_std, g.r0_mean, g.r0_std
        );
    }
}
