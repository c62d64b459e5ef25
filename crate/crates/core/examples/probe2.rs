//! Census-only probe against the checkpoint written by `probe`.

use std::time::Instant;

use rnnscope_core::corpus::{encode_examples, split};
use rnnscope_core::fixedpoints::{fp_census, FpConfig};
use rnnscope_core::model::checkpoint::load_checkpoint;

fn main() {
    let ckpt = load_checkpoint::<f64>(std::path::Path::new("/tmp/probe_gru16.ckpt")).unwrap();
    let data = rnnscope_core::corpus::synth::generate(1);
    let splits = split(&data, &ckpt.split).unwrap();
    let (test_set, _) = encode_examples(&splits.test, &ckpt.vocab, &ckpt.labels);
    let t = Instant::now();
    let census = fp_census(&ckpt.params, &test_set, &FpConfig { seed: 1, ..Default::default() }).unwrap();
    println!(
        "census: {} converged -> {} pts ({} stable, {} 1-idx, {} higher, {} unstable, {} marginal) in {:?}",
        census.converged_ics,
        census.points.len(),
        census.n_stable(),
        census.n_one_index(),
        census.n_higher_index(),
        census.n_unstable(),
        census.marginal.len(),
        t.elapsed()
    );
}
