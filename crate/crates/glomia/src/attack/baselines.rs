//! Attack baselines: the label-only gap attack and two probability-based
//! membership scores.

use crate::attack::LabelOracle;
use crate::error::Result;
use crate::tud::Graph;

const CLAMP: f64 = 1e-12;

/// Gap attack verdict: a graph is called a member exactly when the oracle
/// predicts its true label.
pub fn gap_attack(graph: &Graph, oracle: &dyn LabelOracle) -> Result<bool> {
    Ok(oracle.predict_label(graph)? == graph.label)
}

/// Expected gap-attack accuracy on a balanced evaluation set:
/// 1/2 + (train accuracy - test accuracy) / 2.
pub fn gap_attack_expected_acc(acc_train: f64, acc_test: f64) -> f64 {
    0.5 + (acc_train - acc_test) / 2.0
}

/// Cross-entropy membership score: -ln p_y, lower for members.
/// Probabilities are clamped to [1e-12, 1] so the score stays finite.
pub fn celoss_score(probs: &[f64], label: usize) -> f64 {
    -probs[label].clamp(CLAMP, 1.0).ln()
}

/// Modified prediction entropy, lower for members:
/// -(1 - p_y) ln(p_y) - sum over i != y of p_i ln(1 - p_i),
/// with every ln argument clamped to at least 1e-12.
pub fn mentr_score(probs: &[f64], label: usize) -> f64 {
    let p_y = probs[label];
    let mut score = -(1.0 - p_y) * p_y.max(CLAMP).ln();
    for (i, &p) in probs.iter().enumerate() {
        if i != label {
            score -= p * (1.0 - p).max(CLAMP).ln();
        }
    }
    score
}
