//! Parse a benchmark corpus directory and print its statistics.
//!
//! ```bash
//! cargo run --release --example parse_stats -- data/ENZYMES ENZYMES
//! ```
//!
//! Without arguments a synthetic corpus is generated in a temp directory,
//! exported to the flat-file layout, and parsed back, so the example runs
//! without any dataset download.

use glomia::synth::{make_corpus, SynthConfig};
use glomia::tud::{corpus_stats, default_feature_mode, export_corpus, parse_corpus};
use std::path::PathBuf;

fn main() -> glomia::Result<()> {
    let mut args = std::env::args().skip(1);
    let (dir, name) = match (args.next(), args.next()) {
        (Some(dir), Some(name)) => (PathBuf::from(dir), name),
        _ => {
            println!("no corpus given; exporting a synthetic one\n");
            let corpus = make_corpus(&SynthConfig::default());
            let dir = std::env::temp_dir().join("glomia_parse_stats");
            export_corpus(&corpus, &dir)?;
            (dir, corpus.name)
        }
    };

    let mode = default_feature_mode(&dir, &name);
    let corpus = parse_corpus(&dir, &name, mode)?;
    let stats = corpus_stats(&corpus)?;

    println!("corpus       {name}");
    println!("feature mode {mode}");
    println!("graphs       {}", stats.graph_count);
    println!("classes      {}", stats.class_count);
    println!("feature dim  {}", corpus.feature_dim());
    println!("avg nodes    {:.2}", stats.avg_nodes);
    println!("avg edges    {:.2}", stats.avg_edges);
    Ok(())
}
