//! Sweep the perturbation scaler on a shadow model and pick the threshold.
//!
//! Walks the scaler grid upward, printing the balanced accuracy and AUC of
//! separating shadow members from shadow non-members at each step, until
//! both begin to decline.
//!
//! ```bash
//! cargo run --release --example calibrate_threshold
//! ```

use glomia::attack::estimate_scaler_and_threshold;
use glomia::gnn::{train, Arch, TrainConfig};
use glomia::perturb::PerturbConfig;
use glomia::synth::{make_corpus, SynthConfig};

fn main() -> glomia::Result<()> {
    let corpus = make_corpus(&SynthConfig {
        graphs: 80,
        classes: 2,
        class_separation: 0.25,
        noise: 0.4,
        seed: 20,
        ..Default::default()
    });
    let shadow_train: Vec<_> = corpus.graphs[..40].iter().collect();
    let shadow_test: Vec<_> = corpus.graphs[40..].iter().collect();

    let (shadow, _) = train(
        Arch::Gcn,
        corpus.class_count,
        &shadow_train,
        &TrainConfig {
            epochs: 250,
            hidden_dim: 16,
            seed: 3,
            ..Default::default()
        },
    )?;

    let base = PerturbConfig {
        n_copies: 150,
        seed: 12,
        ..Default::default()
    };
    let grid = [0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 15.0, 20.0];
    let sweep = estimate_scaler_and_threshold(&shadow, &shadow_train, &shadow_test, &base, &grid)?;

    println!("scaler  threshold  acc    auc");
    for p in &sweep.points {
        println!(
            "{:<7} {:<10.3} {:<6.3} {:.3}",
            p.scaler, p.threshold, p.acc, p.auc
        );
    }
    println!(
        "\nchosen scaler {} with threshold {:.3} ({}, {})",
        sweep.scaler,
        sweep.threshold,
        if sweep.separable { "separable" } else { "NOT separable" },
        if sweep.stopped_early {
            "stopped at the first joint decline"
        } else {
            "grid exhausted"
        }
    );
    Ok(())
}
