//! Synthetic graph corpora for smoke tests and examples.
//!
//! Graphs are Erdos-Renyi with class-dependent feature means, so a small
//! classifier separates the classes quickly and memorizes individual graphs
//! when trained long enough. All feature entries are bounded away from zero,
//! which keeps the whole feature matrix eligible for perturbation.

use crate::tensor::Rng;
use crate::tud::{Corpus, FeatureMode, Graph};

/// Knobs for [`make_corpus`].
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub graphs: usize,
    pub classes: usize,
    pub nodes_lo: usize,
    pub nodes_hi: usize,
    pub feature_dim: usize,
    pub edge_prob: f64,
    /// Distance between per-class feature means; smaller is harder.
    pub class_separation: f64,
    /// Per-entry uniform noise half-width around the class mean.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            graphs: 40,
            classes: 2,
            nodes_lo: 5,
            nodes_hi: 12,
            feature_dim: 6,
            edge_prob: 0.3,
            class_separation: 1.0,
            noise: 0.25,
            seed: 0,
        }
    }
}

/// Build a deterministic corpus: labels cycle through the classes, features
/// are `U(-noise, noise)` around the class mean.
pub fn make_corpus(cfg: &SynthConfig) -> Corpus {
    assert!(cfg.classes >= 1 && cfg.nodes_lo >= 1 && cfg.nodes_hi >= cfg.nodes_lo);
    assert!(cfg.noise < 0.5, "noise must keep entries away from zero");
    let mut graphs = Vec::with_capacity(cfg.graphs);
    for gi in 0..cfg.graphs {
        let mut rng = Rng::new(cfg.seed).child("synth-graph", gi as u64);
        let label = gi % cfg.classes;
        let span = cfg.nodes_hi - cfg.nodes_lo + 1;
        let n = cfg.nodes_lo + rng.next_index(span);

        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.next_f64() < cfg.edge_prob {
                    edges.push((a as u32, b as u32));
                }
            }
        }

        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = Vec::with_capacity(cfg.feature_dim);
            for d in 0..cfg.feature_dim {
                let mean = if d % cfg.classes == label {
                    0.5 + cfg.class_separation
                } else {
                    0.5
                };
                row.push(mean + rng.uniform_scalar(-cfg.noise, cfg.noise));
            }
            rows.push(row);
        }

        graphs.push(Graph {
            node_count: n,
            edges,
            features: crate::tensor::Matrix::from_rows(&rows).expect("rows are rectangular"),
            label,
            source_id: (gi + 1) as u32,
        });
    }
    Corpus {
        name: "synthetic".to_string(),
        graphs,
        class_count: cfg.classes,
        feature_mode: FeatureMode::AttributesOnly,
    }
}
