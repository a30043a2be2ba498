//! Score members against non-members: the signal the attack thresholds.
//!
//! Trains a deliberately overfit classifier on half of a synthetic corpus,
//! then prints the robustness-score histogram of training members versus
//! held-out graphs.
//!
//! ```bash
//! cargo run --release --example robustness_scores
//! ```

use glomia::attack::score_set;
use glomia::gnn::{train, Arch, TrainConfig};
use glomia::perturb::PerturbConfig;
use glomia::synth::{make_corpus, SynthConfig};

fn main() -> glomia::Result<()> {
    let corpus = make_corpus(&SynthConfig {
        graphs: 60,
        classes: 2,
        class_separation: 0.25, // hard enough that the model memorizes
        noise: 0.4,
        seed: 5,
        ..Default::default()
    });
    let members: Vec<_> = corpus.graphs[..30].iter().collect();
    let outsiders: Vec<_> = corpus.graphs[30..].iter().collect();

    let (model, _) = train(
        Arch::Sage,
        corpus.class_count,
        &members,
        &TrainConfig {
            epochs: 250,
            hidden_dim: 16,
            seed: 2,
            ..Default::default()
        },
    )?;

    let cfg = PerturbConfig {
        n_copies: 200,
        scaler: 1.5,
        seed: 9,
        ..Default::default()
    };
    let ds = score_set(&model, &members, &outsiders, &cfg)?;

    println!("robustness scores at scaler {} (N = {}):\n", cfg.scaler, cfg.n_copies);
    println!("  score   members  non-members");
    for (edge, m, n) in ds.histogram(10) {
        println!(
            "  [{:.1},{:.1})  {:<8} {}",
            edge,
            edge + 0.1,
            "#".repeat(m),
            "#".repeat(n)
        );
    }
    let mean = |member: bool| {
        let v: Vec<f64> = ds
            .records()
            .iter()
            .filter(|r| r.is_member == member)
            .map(|r| r.score)
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    println!(
        "\nmean member score {:.3}, mean non-member score {:.3}",
        mean(true),
        mean(false)
    );
    Ok(())
}
