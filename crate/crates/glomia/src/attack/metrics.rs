//! ROC curves, AUC, and threshold selection over score/membership records.

use crate::error::{Error, Result};

/// One scored example: higher scores mean more member-like.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScoreRecord {
    pub score: f64,
    pub is_member: bool,
}

/// ROC sweep result. Thresholds are the distinct score values in
/// descending order; `tpr[k]` / `fpr[k]` are the rates of the rule
/// `score > thresholds[k]`, so both run monotone nondecreasing.
#[derive(Debug, Clone)]
pub struct RocCurve {
    pub thresholds: Vec<f64>,
    pub tpr: Vec<f64>,
    pub fpr: Vec<f64>,
    pub auc: f64,
}

/// ROC curve and AUC by the trapezoidal rule. Ties contribute one half,
/// which makes the area equal to the Mann-Whitney statistic
/// P(member > nonmember) + P(equal) / 2.
pub fn roc_and_auc(records: &[ScoreRecord]) -> Result<RocCurve> {
    let pos = records.iter().filter(|r| r.is_member).count();
    let neg = records.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate(
            "ROC needs both members and non-members".to_string(),
        ));
    }
    for r in records {
        if !r.score.is_finite() {
            return Err(Error::Numerical {
                context: "roc_and_auc: non-finite score".to_string(),
            });
        }
    }

    let mut sorted: Vec<&ScoreRecord> = records.iter().collect();
    sorted.sort_by(|a, b| b.score.partial_cmp(&a.score).expect("finite scores"));

    let mut thresholds = Vec::new();
    let mut tpr = Vec::new();
    let mut fpr = Vec::new();
    let mut auc = 0.0;
    let (mut cum_tp, mut cum_fp) = (0usize, 0usize);

    let mut i = 0;
    while i < sorted.len() {
        let value = sorted[i].score;
        let mut group_tp = 0usize;
        let mut group_fp = 0usize;
        while i < sorted.len() && sorted[i].score == value {
            if sorted[i].is_member {
                group_tp += 1;
            } else {
                group_fp += 1;
            }
            i += 1;
        }
        // trapezoid over the tie group = half credit for ties
        auc += group_fp as f64 * (cum_tp as f64 + group_tp as f64 / 2.0);
        cum_tp += group_tp;
        cum_fp += group_fp;
        thresholds.push(value);
        tpr.push(cum_tp as f64 / pos as f64);
        fpr.push(cum_fp as f64 / neg as f64);
    }
    auc /= (pos * neg) as f64;

    Ok(RocCurve {
        thresholds,
        tpr,
        fpr,
        auc,
    })
}

/// Threshold maximizing balanced accuracy of the strict rule `score > t`,
/// swept over the ROC thresholds plus one value below the minimum.
/// Ties prefer the larger threshold. Returns (threshold, balanced accuracy).
///
/// The curve's rates at `thresholds[k]` are those of `score >= thresholds[k]`,
/// which under the strict rule belong to the candidate `thresholds[k + 1]`;
/// the largest threshold itself classifies nothing as member.
pub fn best_balanced_threshold(records: &[ScoreRecord]) -> Result<(f64, f64)> {
    let roc = roc_and_auc(records)?;
    let min_score = *roc.thresholds.last().expect("nonempty");
    // candidates in descending order, so ties keep the larger threshold
    let mut best_t = roc.thresholds[0];
    let mut best_acc = 0.5; // score > max: nothing passes
    for k in 1..roc.thresholds.len() {
        let acc = balanced_accuracy(roc.tpr[k - 1], roc.fpr[k - 1]);
        if acc > best_acc {
            best_acc = acc;
            best_t = roc.thresholds[k];
        }
    }
    let last = roc.thresholds.len() - 1;
    let below_min = balanced_accuracy(roc.tpr[last], roc.fpr[last]);
    if below_min > best_acc {
        best_acc = below_min;
        best_t = min_score - 1.0;
    }
    Ok((best_t, best_acc))
}

fn balanced_accuracy(tpr: f64, fpr: f64) -> f64 {
    (tpr + 1.0 - fpr) / 2.0
}

/// Fraction of membership verdicts that match the truth.
pub fn attack_accuracy(decisions: &[bool], truth: &[bool]) -> Result<f64> {
    if decisions.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if decisions.len() != truth.len() {
        return Err(Error::Config(format!(
            "decision/truth length mismatch: {} vs {}",
            decisions.len(),
            truth.len()
        )));
    }
    let correct = decisions
        .iter()
        .zip(truth)
        .filter(|(d, t)| d == t)
        .count();
    Ok(correct as f64 / decisions.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(score: f64, is_member: bool) -> ScoreRecord {
        ScoreRecord { score, is_member }
    }

    /// O(n^2) Mann-Whitney oracle: P(member > nonmember) + P(equal)/2.
    fn pairwise_auc(records: &[ScoreRecord]) -> f64 {
        let members: Vec<f64> = records.iter().filter(|r| r.is_member).map(|r| r.score).collect();
        let nons: Vec<f64> = records
            .iter()
            .filter(|r| !r.is_member)
            .map(|r| r.score)
            .collect();
        let mut total = 0.0;
        for &m in &members {
            for &n in &nons {
                total += if m > n {
                    1.0
                } else if m == n {
                    0.5
                } else {
                    0.0
                };
            }
        }
        total / (members.len() * nons.len()) as f64
    }

    #[test]
    fn perfectly_separated_scores_give_auc_one() {
        let records = vec![rec(0.9, true), rec(0.8, true), rec(0.2, false), rec(0.1, false)];
        assert_eq!(roc_and_auc(&records).unwrap().auc, 1.0);
    }

    #[test]
    fn all_equal_scores_give_auc_half() {
        let records = vec![rec(0.5, true), rec(0.5, false), rec(0.5, true), rec(0.5, false)];
        assert_eq!(roc_and_auc(&records).unwrap().auc, 0.5);
    }

    #[test]
    fn textbook_four_point_case() {
        let records = vec![rec(0.1, false), rec(0.4, false), rec(0.35, true), rec(0.8, true)];
        assert!((roc_and_auc(&records).unwrap().auc - 0.75).abs() < 1e-12);
    }

    #[test]
    fn single_class_is_degenerate() {
        let records = vec![rec(0.5, true), rec(0.7, true)];
        assert!(matches!(
            roc_and_auc(&records),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn curve_is_monotone() {
        let mut rng = crate::tensor::Rng::new(4);
        let records: Vec<ScoreRecord> = (0..60)
            .map(|i| rec((rng.next_f64() * 10.0).round() / 10.0, i % 2 == 0))
            .collect();
        let roc = roc_and_auc(&records).unwrap();
        for w in roc.tpr.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in roc.fpr.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in roc.thresholds.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn best_threshold_separates_clean_split() {
        let records = vec![rec(1.0, true), rec(0.9, true), rec(0.3, false), rec(0.2, false)];
        let (t, acc) = best_balanced_threshold(&records).unwrap();
        assert_eq!(acc, 1.0);
        // the highest non-member score is the largest separating candidate
        assert_eq!(t, 0.3);
        // strict '>' semantics: members sit strictly above
        assert!(records.iter().all(|r| (r.score > t) == r.is_member));
    }

    #[test]
    fn degenerate_identical_scores_yield_half_accuracy() {
        let records = vec![rec(0.5, true), rec(0.5, false)];
        let (_, acc) = best_balanced_threshold(&records).unwrap();
        assert_eq!(acc, 0.5);
    }

    #[test]
    fn attack_accuracy_counts() {
        assert_eq!(
            attack_accuracy(&[true, false, true], &[true, false, true]).unwrap(),
            1.0
        );
        assert_eq!(
            attack_accuracy(
                &[true, true, false, false, true, true, false, false, true, true],
                &[true, true, false, false, true, false, true, true, false, false]
            )
            .unwrap(),
            0.5
        );
        assert!(matches!(attack_accuracy(&[], &[]), Err(Error::EmptyCorpus)));
    }

    proptest! {
        // Trapezoidal AUC equals the O(n^2) pairwise oracle.
        #[test]
        fn auc_matches_pairwise_oracle(seed in any::<u64>(), n in 4usize..200) {
            let mut rng = crate::tensor::Rng::new(seed);
            let mut records: Vec<ScoreRecord> = (0..n)
                .map(|_| {
                    // quantized scores force plenty of ties
                    let s = (rng.next_f64() * 8.0).floor() / 8.0;
                    rec(s, rng.bernoulli_int() == 1)
                })
                .collect();
            records[0].is_member = true;
            records[1].is_member = false;
            let fast = roc_and_auc(&records).unwrap().auc;
            let slow = pairwise_auc(&records);
            prop_assert!((fast - slow).abs() < 1e-9, "{} vs {}", fast, slow);
        }

        // AUC is invariant under strictly increasing transforms.
        #[test]
        fn auc_invariant_under_monotone_transforms(seed in any::<u64>()) {
            let mut rng = crate::tensor::Rng::new(seed);
            let mut records: Vec<ScoreRecord> = (0..50)
                .map(|_| rec(rng.next_f64(), rng.bernoulli_int() == 1))
                .collect();
            records[0].is_member = true;
            records[1].is_member = false;
            let base = roc_and_auc(&records).unwrap().auc;
            let affine: Vec<ScoreRecord> = records
                .iter()
                .map(|r| rec(3.0 * r.score + 7.0, r.is_member))
                .collect();
            let cubic: Vec<ScoreRecord> = records
                .iter()
                .map(|r| rec(r.score.powi(3), r.is_member))
                .collect();
            prop_assert!((roc_and_auc(&affine).unwrap().auc - base).abs() < 1e-12);
            prop_assert!((roc_and_auc(&cubic).unwrap().auc - base).abs() < 1e-12);
        }
    }
}
