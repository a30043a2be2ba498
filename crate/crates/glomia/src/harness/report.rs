//! Report files: `report.json`, `summary.csv`, per-scaler sweep and
//! histogram CSVs, and `roc.csv`.
//!
//! File schemas:
//! - `summary.csv`:
//!   `dataset,model,train_test_gap,glo_mia_acc,gap_attack_acc,glo_mia_auc,celoss_auc,mentr_auc`
//! - `sweep_<s>.csv`: `scaler,threshold,acc,auc`, one row per repetition
//!   that visited scaler `s`.
//! - `hist_<s>.csv`: `score,member_count,nonmember_count`, 20 equal-width
//!   bins over [0, 1] (lower edges), counts summed over repetitions.
//! - `roc.csv`: `threshold,fpr,tpr` for the first repetition's target-side
//!   ROC curve.

use super::{ExperimentReport, HISTOGRAM_BINS};
use crate::attack::{RocCurve, SweepOutcome};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

fn write_file(dir: &Path, name: &str, content: String) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| Error::io(&path, e))
}

/// Write every report artifact into `dir`.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    write_file(dir, "report.json", serde_json::to_string_pretty(report)?)?;

    let mut summary = String::from(
        "dataset,model,train_test_gap,glo_mia_acc,gap_attack_acc,glo_mia_auc,celoss_auc,mentr_auc\n",
    );
    let m = &report.mean;
    summary.push_str(&format!(
        "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
        report.config.dataset.name,
        report.config.arch,
        m.train_test_gap,
        m.attack_acc,
        m.gap_attack_acc,
        m.attack_auc,
        m.celoss_auc,
        m.mentr_auc,
    ));
    write_file(dir, "summary.csv", summary)?;

    // group sweep rows and histogram counts by scaler across repetitions
    let mut sweep_rows: BTreeMap<String, String> = BTreeMap::new();
    let mut hist_counts: BTreeMap<String, Vec<(f64, usize, usize)>> = BTreeMap::new();
    for run in &report.runs {
        let Some(metrics) = &run.metrics else {
            continue;
        };
        for p in &metrics.sweep {
            sweep_rows
                .entry(p.scaler.to_string())
                .or_insert_with(|| "scaler,threshold,acc,auc\n".to_string())
                .push_str(&format!(
                    "{},{:.6},{:.6},{:.6}\n",
                    p.scaler, p.threshold, p.acc, p.auc
                ));
        }
        for h in &metrics.histograms {
            let bins = hist_counts
                .entry(h.scaler.to_string())
                .or_insert_with(|| (0..HISTOGRAM_BINS).map(|b| (b as f64 / HISTOGRAM_BINS as f64, 0, 0)).collect());
            for (bin, &(_, members, nons)) in bins.iter_mut().zip(&h.bins) {
                bin.1 += members;
                bin.2 += nons;
            }
        }
    }
    for (scaler, rows) in &sweep_rows {
        write_file(dir, &format!("sweep_{scaler}.csv"), rows.clone())?;
    }
    for (scaler, bins) in &hist_counts {
        let mut csv = String::from("score,member_count,nonmember_count\n");
        for (edge, members, nons) in bins {
            csv.push_str(&format!("{edge},{members},{nons}\n"));
        }
        write_file(dir, &format!("hist_{scaler}.csv"), csv)?;
    }

    let mut roc = String::from("threshold,fpr,tpr\n");
    for p in &report.target_roc {
        roc.push_str(&format!("{:.6},{:.6},{:.6}\n", p.threshold, p.fpr, p.tpr));
    }
    write_file(dir, "roc.csv", roc)
}

/// Read back a `report.json` written by [`emit_report`].
pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let bytes = std::fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileMissing { path: path.into() }
        } else {
            Error::io(path, e)
        }
    })?;
    Ok(serde_json::from_slice(&bytes)?)
}

/// Sweep and histogram CSVs for a single calibration sweep (the
/// stage-wise `calibrate` subcommand).
pub(crate) fn write_sweep_files(dir: &Path, sweep: &SweepOutcome) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (point, ds) in sweep.points.iter().zip(&sweep.datasets) {
        let rows = format!(
            "scaler,threshold,acc,auc\n{},{:.6},{:.6},{:.6}\n",
            point.scaler, point.threshold, point.acc, point.auc
        );
        write_file(dir, &format!("sweep_{}.csv", point.scaler), rows)?;
        let mut csv = String::from("score,member_count,nonmember_count\n");
        for (edge, members, nons) in ds.histogram(HISTOGRAM_BINS) {
            csv.push_str(&format!("{edge},{members},{nons}\n"));
        }
        write_file(dir, &format!("hist_{}.csv", point.scaler), csv)?;
    }
    Ok(())
}

pub(crate) fn write_roc_csv(dir: &Path, roc: &RocCurve) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut csv = String::from("threshold,fpr,tpr\n");
    for ((t, f), p) in roc
        .thresholds
        .iter()
        .zip(&roc.fpr)
        .zip(&roc.tpr)
    {
        csv.push_str(&format!("{:.6},{:.6},{:.6}\n", t, f, p));
    }
    write_file(dir, "roc.csv", csv)
}
