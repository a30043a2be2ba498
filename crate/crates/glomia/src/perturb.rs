//! Feature perturbation: signed uniform noise on non-zero entries.
//!
//! Copies of a graph keep its structure and label untouched; only the
//! feature matrix moves. Every non-zero entry receives a magnitude drawn
//! uniformly from the scaled range [s * r_min, s * r_max), with an
//! independent fair coin choosing addition or subtraction. Zero entries
//! stay exactly zero. A perturbed value may flip sign or land on zero;
//! nothing is clamped or redrawn.
//!
//! Each copy draws from its own derived stream,
//! `seed -> ("perturb-graph", source_id) -> ("copy", index)`, so any single
//! copy can be regenerated without producing the ones before it.

use crate::error::{Error, Result};
use crate::tensor::{Matrix, Rng};
use crate::tud::Graph;
use serde::{Deserialize, Serialize};

/// Everything the copy generator consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbConfig {
    /// Number of copies per graph (N).
    pub n_copies: usize,
    /// Multiplier applied to the base range (s).
    pub scaler: f64,
    /// Base range lower bound; default 0.1.
    pub r_min: f64,
    /// Base range upper bound; default 0.5.
    pub r_max: f64,
    pub seed: u64,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig {
            n_copies: 1000,
            scaler: 1.0,
            r_min: 0.1,
            r_max: 0.5,
            seed: 0,
        }
    }
}

impl PerturbConfig {
    /// The adjusted sampling interval [s * r_min, s * r_max).
    pub fn bounds(&self) -> (f64, f64) {
        (self.scaler * self.r_min, self.scaler * self.r_max)
    }

    /// Same config with a different scaler.
    pub fn with_scaler(&self, scaler: f64) -> PerturbConfig {
        PerturbConfig {
            scaler,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_copies == 0 {
            return Err(Error::Config("n_copies must be at least 1".to_string()));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.scaler > 0.0) {
            return Err(Error::Range {
                lo: self.scaler * self.r_min,
                hi: self.scaler * self.r_max,
            });
        }
        Ok(())
    }

    /// Stream for copy `index` of `graph`.
    pub(crate) fn copy_rng(&self, graph: &Graph, index: usize) -> Rng {
        Rng::new(self.seed)
            .child("perturb-graph", u64::from(graph.source_id))
            .child("copy", index as u64)
    }
}

/// An original graph with its generated copies.
#[derive(Debug, Clone)]
pub struct PerturbedSet {
    pub original: Graph,
    pub copies: Vec<Graph>,
}

/// 0/1 mask of the non-zero feature positions (exact comparison).
pub fn nonzero_mask(features: &Matrix) -> Matrix {
    features.map(|v| if v != 0.0 { 1.0 } else { 0.0 })
}

/// Magnitudes: uniform in [lo, hi) where the mask is set, exactly zero
/// elsewhere. Masked positions are drawn in row-major order.
pub fn perturbation_matrix(mask: &Matrix, lo: f64, hi: f64, rng: &mut Rng) -> Result<Matrix> {
    if !(lo < hi) {
        return Err(Error::Range { lo, hi });
    }
    let mut out = mask.clone();
    for v in out.data_mut() {
        *v = if *v != 0.0 { rng.uniform_scalar(lo, hi) } else { 0.0 };
    }
    Ok(out)
}

/// Signs: -1 or +1 (2 * o - 1 for a fair bit o) where the mask is set,
/// zero elsewhere. Row-major draw order, independent of the magnitudes.
pub fn operator_matrix(mask: &Matrix, rng: &mut Rng) -> Matrix {
    let mut out = mask.clone();
    for v in out.data_mut() {
        *v = if *v != 0.0 {
            2.0 * f64::from(rng.bernoulli_int()) - 1.0
        } else {
            0.0
        };
    }
    out
}

/// One perturbed copy: X' = X + PM (.) OM. Structure and label are shared
/// with the original, which is left untouched.
pub fn perturb_graph(graph: &Graph, lo: f64, hi: f64, rng: &mut Rng) -> Result<Graph> {
    let mask = nonzero_mask(&graph.features);
    let magnitudes = perturbation_matrix(&mask, lo, hi, rng)?;
    let signs = operator_matrix(&mask, rng);
    let delta = magnitudes.hadamard(&signs)?;
    Ok(Graph {
        node_count: graph.node_count,
        edges: graph.edges.clone(),
        features: graph.features.add(&delta)?,
        label: graph.label,
        source_id: graph.source_id,
    })
}

/// Generate all N copies for a graph. Copy `i` uses its own derived seed,
/// so the output is the same whether copies are produced here or streamed
/// one at a time by the scorer.
pub fn generate_set(graph: &Graph, cfg: &PerturbConfig) -> Result<PerturbedSet> {
    cfg.validate()?;
    let (lo, hi) = cfg.bounds();
    let mut copies = Vec::with_capacity(cfg.n_copies);
    for i in 0..cfg.n_copies {
        let mut rng = cfg.copy_rng(graph, i);
        copies.push(perturb_graph(graph, lo, hi, &mut rng)?);
    }
    Ok(PerturbedSet {
        original: graph.clone(),
        copies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{make_corpus, SynthConfig};

    fn sample_graph(seed: u64) -> Graph {
        make_corpus(&SynthConfig {
            graphs: 1,
            classes: 1,
            seed,
            ..Default::default()
        })
        .graphs
        .remove(0)
    }

    #[test]
    fn mask_marks_exact_nonzeros() {
        let x = Matrix::from_rows(&[vec![0.0, 1e-300], vec![-2.0, 0.0]]).unwrap();
        let m = nonzero_mask(&x);
        assert_eq!(m.data(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn all_zero_features_produce_identical_copy() {
        let mut g = sample_graph(1);
        g.features = Matrix::zeros(g.node_count, g.features.cols());
        let mut rng = Rng::new(5);
        let copy = perturb_graph(&g, 0.1, 0.5, &mut rng).unwrap();
        assert_eq!(copy.features, g.features);
    }

    #[test]
    fn magnitudes_respect_scaled_bounds() {
        let g = sample_graph(2);
        for scaler in [1.0, 15.0] {
            let (lo, hi) = (scaler * 0.1, scaler * 0.5);
            let mut rng = Rng::new(7);
            let copy = perturb_graph(&g, lo, hi, &mut rng).unwrap();
            for (orig, new) in g.features.data().iter().zip(copy.features.data()) {
                let delta = (new - orig).abs();
                assert!(*orig != 0.0, "synthetic features are all nonzero");
                assert!(delta >= lo && delta < hi, "delta {delta} outside [{lo}, {hi})");
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_the_copy() {
        let g = sample_graph(3);
        let a = perturb_graph(&g, 0.1, 0.5, &mut Rng::new(9)).unwrap();
        let b = perturb_graph(&g, 0.1, 0.5, &mut Rng::new(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn operator_entries_are_signs_with_zero_mean() {
        let mask = Matrix::from_vec(100, 10, vec![1.0; 1000]).unwrap();
        let mut rng = Rng::new(13);
        let mut sum = 0.0;
        let mut count = 0usize;
        for _ in 0..100 {
            let om = operator_matrix(&mask, &mut rng);
            for v in om.data() {
                assert!(*v == 1.0 || *v == -1.0);
                sum += v;
                count += 1;
            }
        }
        assert_eq!(count, 100_000);
        assert!((sum / count as f64).abs() < 0.02);
    }

    #[test]
    fn masked_out_positions_stay_zero_in_pm_and_om() {
        let mask = Matrix::zeros(3, 4);
        let mut rng = Rng::new(1);
        let pm = perturbation_matrix(&mask, 0.1, 0.5, &mut rng).unwrap();
        let om = operator_matrix(&mask, &mut rng);
        assert_eq!(pm, Matrix::zeros(3, 4));
        assert_eq!(om, Matrix::zeros(3, 4));
    }

    #[test]
    fn bad_range_is_rejected() {
        let mask = Matrix::zeros(1, 1);
        let mut rng = Rng::new(1);
        assert!(matches!(
            perturbation_matrix(&mask, 0.5, 0.1, &mut rng),
            Err(Error::Range { .. })
        ));
        let cfg = PerturbConfig {
            r_min: 0.5,
            r_max: 0.1,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn generate_set_keeps_structure_and_originals() {
        let g = sample_graph(4);
        let snapshot = g.clone();
        let cfg = PerturbConfig {
            n_copies: 25,
            seed: 21,
            ..Default::default()
        };
        let set = generate_set(&g, &cfg).unwrap();
        assert_eq!(g, snapshot, "original must not move");
        assert_eq!(set.copies.len(), 25);
        for c in &set.copies {
            assert_eq!(c.edges, g.edges);
            assert_eq!(c.node_count, g.node_count);
            assert_eq!(c.label, g.label);
            assert_ne!(c.features, g.features);
        }
        // distinct copies differ from each other
        assert_ne!(set.copies[0].features, set.copies[1].features);
        // and the whole set reproduces under the same seed
        let again = generate_set(&g, &cfg).unwrap();
        for (a, b) in set.copies.iter().zip(&again.copies) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn singleton_set() {
        let g = sample_graph(5);
        let cfg = PerturbConfig {
            n_copies: 1,
            ..Default::default()
        };
        assert_eq!(generate_set(&g, &cfg).unwrap().copies.len(), 1);
    }

    proptest::proptest! {
        // Invariants over random (graph, config) pairs.
        #[test]
        fn perturbation_invariants(seed in proptest::prelude::any::<u64>(), scaler in 0.1f64..20.0) {
            let g = sample_graph(seed);
            let cfg = PerturbConfig { n_copies: 3, scaler, seed, ..Default::default() };
            let (lo, hi) = cfg.bounds();
            let set = generate_set(&g, &cfg).unwrap();
            for c in &set.copies {
                proptest::prop_assert_eq!(&c.edges, &g.edges);
                for (orig, new) in g.features.data().iter().zip(c.features.data()) {
                    if *orig == 0.0 {
                        proptest::prop_assert_eq!(*new, 0.0);
                    } else {
                        let d = (new - orig).abs();
                        proptest::prop_assert!(d >= lo && d < hi);
                    }
                }
            }
        }
    }
}
