//! Train a small graph classifier and round-trip its checkpoint.
//!
//! ```bash
//! cargo run --release --example train_classifier -- gin
//! ```

use glomia::gnn::{accuracy, load_checkpoint, save_checkpoint, train, Arch, TrainConfig};
use glomia::synth::{make_corpus, SynthConfig};

fn main() -> glomia::Result<()> {
    let arch = std::env::args()
        .nth(1)
        .map(|s| Arch::parse(&s))
        .transpose()?
        .unwrap_or(Arch::Gcn);

    let corpus = make_corpus(&SynthConfig {
        graphs: 60,
        classes: 3,
        class_separation: 0.6,
        seed: 7,
        ..Default::default()
    });
    let train_set: Vec<_> = corpus.graphs[..40].iter().collect();
    let test_set: Vec<_> = corpus.graphs[40..].iter().collect();

    let cfg = TrainConfig {
        epochs: 120,
        hidden_dim: 16,
        seed: 1,
        ..Default::default()
    };
    println!("training a 2-layer {arch} (hidden {})...", cfg.hidden_dim);
    let (model, history) = train(arch, corpus.class_count, &train_set, &cfg)?;
    for stats in history.iter().step_by(20) {
        println!(
            "epoch {:>3}  loss {:.4}  train acc {:.3}",
            stats.epoch, stats.loss, stats.train_acc
        );
    }
    println!(
        "final      train acc {:.3}  test acc {:.3}",
        accuracy(&model, &train_set)?,
        accuracy(&model, &test_set)?
    );

    let path = std::env::temp_dir().join("glomia_example_model.bin");
    save_checkpoint(&model, &path, Some(&cfg))?;
    let restored = load_checkpoint(&path)?;
    let g = &corpus.graphs[0];
    assert_eq!(model.forward(g)?, restored.forward(g)?);
    println!("checkpoint round-trip OK: {}", path.display());
    Ok(())
}
