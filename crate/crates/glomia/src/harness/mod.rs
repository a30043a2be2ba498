//! Experiment orchestration: corpus splitting, target/shadow training,
//! calibration, attack evaluation, baselines, repetition averaging, and
//! machine-readable reports.
//!
//! Every random choice derives from one master seed, so a config plus seed
//! reproduces `report.json` byte for byte (timestamps aside). Repetitions
//! re-split and re-seed everything, which measures split variance rather
//! than just training noise.

mod config;
mod report;

pub use config::{default_s_grid, load_config, parse_config, DatasetConfig, ExperimentConfig};
pub use report::{emit_report, read_report};

use crate::attack::{
    self, attack_accuracy, celoss_score, gap_attack, gap_attack_expected_acc, mentr_score,
    roc_and_auc, AttackContext, ScoreRecord, SweepPoint,
};
use crate::error::{Error, Result};
use crate::gnn::{accuracy, load_checkpoint, save_checkpoint, train, GnnModel, TrainConfig};
use crate::perturb::PerturbConfig;
use crate::tensor::{derive_seed, Rng};
use crate::tud::{default_feature_mode, parse_corpus, Corpus, Graph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Four pairwise-disjoint, equally sized index sets into a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub target_train: Vec<usize>,
    pub target_test: Vec<usize>,
    pub shadow_train: Vec<usize>,
    pub shadow_test: Vec<usize>,
}

impl SplitPlan {
    pub fn sets(&self) -> [&[usize]; 4] {
        [
            &self.target_train,
            &self.target_test,
            &self.shadow_train,
            &self.shadow_test,
        ]
    }

    /// Disjointness, bounds, and equal sizes.
    pub fn validate(&self, corpus_len: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        let size = self.target_train.len();
        for set in self.sets() {
            if set.len() != size {
                return Err(Error::Config("split sets differ in size".to_string()));
            }
            for &i in set {
                if i >= corpus_len || !seen.insert(i) {
                    return Err(Error::Config(format!(
                        "split index {i} out of range or duplicated"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Split a corpus into target/shadow halves, each halved again into
/// equal-sized train/test sets (odd leftovers dropped).
///
/// The shuffle is class-stratified: indices are ordered by a per-class
/// jittered rank, so any contiguous slice carries roughly the corpus class
/// proportions.
pub fn split_dataset(corpus: &Corpus, seed: u64) -> Result<SplitPlan> {
    let n = corpus.len();
    if n < 8 {
        return Err(Error::Config(format!(
            "corpus of {n} graphs is too small to split four ways"
        )));
    }
    // per-class shuffled ranks -> interleaving keys in [0, 1)
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); corpus.class_count];
    for (i, g) in corpus.graphs.iter().enumerate() {
        by_class[g.label].push(i);
    }
    let mut keyed: Vec<(f64, usize)> = Vec::with_capacity(n);
    for (class, members) in by_class.iter_mut().enumerate() {
        let mut rng = Rng::new(seed).child("split-class", class as u64);
        rng.shuffle(members);
        let size = members.len() as f64;
        for (rank, &idx) in members.iter().enumerate() {
            let key = (rank as f64 + rng.next_f64()) / size;
            keyed.push((key, idx));
        }
    }
    keyed.sort_by(|a, b| a.partial_cmp(b).expect("finite keys"));
    let order: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();

    let half = n / 2;
    let quarter = half / 2;
    let target = &order[..half];
    let shadow = &order[half..2 * half];
    Ok(SplitPlan {
        target_train: target[..quarter].to_vec(),
        target_test: target[quarter..2 * quarter].to_vec(),
        shadow_train: shadow[..quarter].to_vec(),
        shadow_test: shadow[quarter..2 * quarter].to_vec(),
    })
}

/// Seeds for one repetition, all derived from the master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeeds {
    pub split: u64,
    pub target_train: u64,
    pub shadow_train: u64,
    pub shadow_perturb: u64,
    pub target_perturb: u64,
}

impl RunSeeds {
    pub fn derive(master: u64, repetition: usize) -> Self {
        let r = repetition as u64;
        RunSeeds {
            split: derive_seed(master, "split", r),
            target_train: derive_seed(master, "train-target", r),
            shadow_train: derive_seed(master, "train-shadow", r),
            shadow_perturb: derive_seed(master, "perturb-shadow", r),
            target_perturb: derive_seed(master, "perturb-target", r),
        }
    }
}

/// Histogram of shadow robustness scores at one scaler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerHistogram {
    pub scaler: f64,
    /// (bin lower edge, member count, non-member count), 20 bins over [0,1].
    pub bins: Vec<(f64, usize, usize)>,
}

pub const HISTOGRAM_BINS: usize = 20;

/// Metrics of one successful repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub target_train_acc: f64,
    pub target_test_acc: f64,
    pub train_test_gap: f64,
    pub shadow_train_acc: f64,
    pub shadow_test_acc: f64,
    pub calibrated_scaler: f64,
    pub calibrated_threshold: f64,
    pub calibration_separable: bool,
    pub calibration_stopped_early: bool,
    pub attack_acc: f64,
    pub attack_auc: f64,
    pub gap_attack_acc: f64,
    pub gap_attack_expected: f64,
    pub celoss_auc: f64,
    pub mentr_auc: f64,
    pub sweep: Vec<SweepPoint>,
    pub histograms: Vec<ScalerHistogram>,
}

/// One repetition: either metrics or the error that aborted it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub repetition: usize,
    pub seeds: RunSeeds,
    pub metrics: Option<RunMetrics>,
    pub error: Option<String>,
}

/// Mean metrics over the successful repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub target_train_acc: f64,
    pub target_test_acc: f64,
    pub train_test_gap: f64,
    pub calibrated_scaler: f64,
    pub calibrated_threshold: f64,
    pub attack_acc: f64,
    pub attack_auc: f64,
    pub gap_attack_acc: f64,
    pub celoss_auc: f64,
    pub mentr_auc: f64,
}

/// One point of the first repetition's target-side ROC curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// The full experiment output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub runs: Vec<RunReport>,
    pub successful_runs: usize,
    pub mean: MeanMetrics,
    /// Target-evaluation ROC of the first successful repetition.
    pub target_roc: Vec<RocPoint>,
    /// Excluded from the determinism comparison.
    pub timestamp: String,
}

fn parse_dataset(cfg: &ExperimentConfig) -> Result<Corpus> {
    let mode = match cfg.dataset.feature_mode {
        Some(m) => m,
        None => default_feature_mode(&cfg.dataset.path, &cfg.dataset.name),
    };
    parse_corpus(&cfg.dataset.path, &cfg.dataset.name, mode)
}

struct RunArtifacts {
    metrics: RunMetrics,
    roc: Vec<RocPoint>,
}

fn negated_probability_records(
    model: &GnnModel,
    members: &[&Graph],
    nonmembers: &[&Graph],
    score: impl Fn(&[f64], usize) -> f64,
) -> Result<Vec<ScoreRecord>> {
    // lower raw score = more member-like, so negate for member-high AUC
    let mut records = Vec::new();
    for (graphs, is_member) in [(members, true), (nonmembers, false)] {
        for g in graphs {
            let probs = model.forward(g)?.probs;
            records.push(ScoreRecord {
                score: -score(&probs, g.label),
                is_member,
            });
        }
    }
    Ok(records)
}

fn run_one(corpus: &Corpus, cfg: &ExperimentConfig, repetition: usize) -> Result<RunArtifacts> {
    let seeds = RunSeeds::derive(cfg.master_seed, repetition);
    let split = split_dataset(corpus, seeds.split)?;
    split.validate(corpus.len())?;

    let target_train = corpus.select(&split.target_train);
    let target_test = corpus.select(&split.target_test);
    let shadow_train = corpus.select(&split.shadow_train);
    let shadow_test = corpus.select(&split.shadow_test);

    let target_cfg = TrainConfig {
        seed: seeds.target_train,
        ..cfg.train.clone()
    };
    let shadow_cfg = TrainConfig {
        seed: seeds.shadow_train,
        ..cfg.train.clone()
    };
    let (target_model, _) = train(cfg.arch, corpus.class_count, &target_train, &target_cfg)?;
    let (shadow_model, _) = train(cfg.arch, corpus.class_count, &shadow_train, &shadow_cfg)?;

    let target_train_acc = accuracy(&target_model, &target_train)?;
    let target_test_acc = accuracy(&target_model, &target_test)?;
    let shadow_train_acc = accuracy(&shadow_model, &shadow_train)?;
    let shadow_test_acc = accuracy(&shadow_model, &shadow_test)?;

    let shadow_perturb = PerturbConfig {
        seed: seeds.shadow_perturb,
        ..cfg.perturb.clone()
    };
    let sweep = attack::estimate_scaler_and_threshold(
        &shadow_model,
        &shadow_train,
        &shadow_test,
        &shadow_perturb,
        &cfg.s_grid,
    )?;

    let target_perturb = PerturbConfig {
        seed: seeds.target_perturb,
        ..cfg.perturb.clone()
    };
    let ctx = AttackContext::new(&target_model, &target_perturb, &sweep);

    let mut decisions = Vec::new();
    let mut truth = Vec::new();
    let mut records = Vec::new();
    for (graphs, is_member) in [(&target_train, true), (&target_test, false)] {
        for g in graphs.iter() {
            let d = attack::infer_membership(g, &ctx)?;
            records.push(ScoreRecord {
                score: d.score,
                is_member,
            });
            decisions.push(d.verdict);
            truth.push(is_member);
        }
    }
    let attack_acc = attack_accuracy(&decisions, &truth)?;
    let target_roc = roc_and_auc(&records)?;

    let mut gap_decisions = Vec::new();
    for set in [&target_train, &target_test] {
        for g in set.iter() {
            gap_decisions.push(gap_attack(g, &target_model)?);
        }
    }
    let gap_acc = attack_accuracy(&gap_decisions, &truth)?;

    let celoss_records =
        negated_probability_records(&target_model, &target_train, &target_test, celoss_score)?;
    let mentr_records =
        negated_probability_records(&target_model, &target_train, &target_test, mentr_score)?;

    let histograms = sweep
        .points
        .iter()
        .zip(&sweep.datasets)
        .map(|(p, ds)| ScalerHistogram {
            scaler: p.scaler,
            bins: ds.histogram(HISTOGRAM_BINS),
        })
        .collect();

    let metrics = RunMetrics {
        target_train_acc,
        target_test_acc,
        train_test_gap: target_train_acc - target_test_acc,
        shadow_train_acc,
        shadow_test_acc,
        calibrated_scaler: sweep.scaler,
        calibrated_threshold: sweep.threshold,
        calibration_separable: sweep.separable,
        calibration_stopped_early: sweep.stopped_early,
        attack_acc,
        attack_auc: target_roc.auc,
        gap_attack_acc: gap_acc,
        gap_attack_expected: gap_attack_expected_acc(target_train_acc, target_test_acc),
        celoss_auc: roc_and_auc(&celoss_records)?.auc,
        mentr_auc: roc_and_auc(&mentr_records)?.auc,
        sweep: sweep.points,
        histograms,
    };
    let roc = target_roc
        .thresholds
        .iter()
        .zip(target_roc.fpr.iter().zip(&target_roc.tpr))
        .map(|(&threshold, (&fpr, &tpr))| RocPoint {
            threshold,
            fpr,
            tpr,
        })
        .collect();
    Ok(RunArtifacts { metrics, roc })
}

/// Run the full pipeline: per repetition, split, train target and shadow,
/// calibrate on the shadow, attack the target's member/non-member
/// evaluation set, and run all three baselines. A failed repetition is
/// recorded and skipped in the averages.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let corpus = parse_dataset(cfg)?;

    let mut runs = Vec::with_capacity(cfg.repetitions);
    let mut target_roc = Vec::new();
    for repetition in 0..cfg.repetitions {
        let seeds = RunSeeds::derive(cfg.master_seed, repetition);
        match run_one(&corpus, cfg, repetition) {
            Ok(artifacts) => {
                if target_roc.is_empty() {
                    target_roc = artifacts.roc;
                }
                runs.push(RunReport {
                    repetition,
                    seeds,
                    metrics: Some(artifacts.metrics),
                    error: None,
                });
            }
            Err(e) => runs.push(RunReport {
                repetition,
                seeds,
                metrics: None,
                error: Some(e.to_string()),
            }),
        }
    }

    let ok: Vec<&RunMetrics> = runs.iter().filter_map(|r| r.metrics.as_ref()).collect();
    if ok.is_empty() {
        let first = runs
            .iter()
            .find_map(|r| r.error.clone())
            .unwrap_or_else(|| "no repetitions".to_string());
        return Err(Error::Config(format!("every repetition failed: {first}")));
    }
    let successful_runs = ok.len();
    let mean_of = |f: fn(&RunMetrics) -> f64| ok.iter().map(|m| f(m)).sum::<f64>() / ok.len() as f64;
    let mean = MeanMetrics {
        target_train_acc: mean_of(|m| m.target_train_acc),
        target_test_acc: mean_of(|m| m.target_test_acc),
        train_test_gap: mean_of(|m| m.train_test_gap),
        calibrated_scaler: mean_of(|m| m.calibrated_scaler),
        calibrated_threshold: mean_of(|m| m.calibrated_threshold),
        attack_acc: mean_of(|m| m.attack_acc),
        attack_auc: mean_of(|m| m.attack_auc),
        gap_attack_acc: mean_of(|m| m.gap_attack_acc),
        celoss_auc: mean_of(|m| m.celoss_auc),
        mentr_auc: mean_of(|m| m.mentr_auc),
    };

    Ok(ExperimentReport {
        config: cfg.clone(),
        successful_runs,
        runs,
        mean,
        target_roc,
        timestamp: now_rfc3339(),
    })
}

fn now_rfc3339() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    // days since epoch -> civil date (Howard Hinnant's algorithm)
    let days = secs / 86_400;
    let rem = secs % 86_400;
    let z = days as i64 + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    let y = if m <= 2 { y + 1 } else { y };
    format!(
        "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
        y,
        m,
        d,
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

// ---------------------------------------------------------------------------
// Stage-wise pipeline for the CLI subcommands. Each stage reads and writes
// artifacts in the configured output directory, using repetition-0 seeds.
// ---------------------------------------------------------------------------

/// `calibration.json` contents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationFile {
    pub scaler: f64,
    pub threshold: f64,
    pub separable: bool,
    pub stopped_early: bool,
    pub points: Vec<SweepPoint>,
}

/// Model role within the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Target,
    Shadow,
}

impl Role {
    pub fn parse(s: &str) -> Result<Role> {
        match s {
            "target" => Ok(Role::Target),
            "shadow" => Ok(Role::Shadow),
            other => Err(Error::Config(format!(
                "role must be `target` or `shadow`, got {other}"
            ))),
        }
    }

    fn stem(self) -> &'static str {
        match self {
            Role::Target => "target_model",
            Role::Shadow => "shadow_model",
        }
    }
}

fn ensure_out_dir(cfg: &ExperimentConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))
}

fn split_path(cfg: &ExperimentConfig) -> std::path::PathBuf {
    cfg.output_dir.join("split.json")
}

fn load_split(cfg: &ExperimentConfig, corpus: &Corpus) -> Result<SplitPlan> {
    let path = split_path(cfg);
    let bytes = std::fs::read(&path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileMissing { path: path.clone() }
        } else {
            Error::io(&path, e)
        }
    })?;
    let plan: SplitPlan = serde_json::from_slice(&bytes)?;
    plan.validate(corpus.len())?;
    Ok(plan)
}

fn load_model(cfg: &ExperimentConfig, role: Role) -> Result<GnnModel> {
    load_checkpoint(&cfg.output_dir.join(format!("{}.bin", role.stem())))
}

/// Train one role's model on its split and save the checkpoint plus the
/// split plan. Returns (train accuracy, test accuracy).
pub fn stage_train(cfg: &ExperimentConfig, role: Role) -> Result<(f64, f64)> {
    cfg.validate()?;
    ensure_out_dir(cfg)?;
    let corpus = parse_dataset(cfg)?;
    let seeds = RunSeeds::derive(cfg.master_seed, 0);
    let split = split_dataset(&corpus, seeds.split)?;
    split.validate(corpus.len())?;
    std::fs::write(split_path(cfg), serde_json::to_vec_pretty(&split)?)
        .map_err(|e| Error::io(split_path(cfg), e))?;

    let (train_idx, test_idx, seed) = match role {
        Role::Target => (&split.target_train, &split.target_test, seeds.target_train),
        Role::Shadow => (&split.shadow_train, &split.shadow_test, seeds.shadow_train),
    };
    let train_set = corpus.select(train_idx);
    let test_set = corpus.select(test_idx);
    let train_cfg = TrainConfig {
        seed,
        ..cfg.train.clone()
    };
    let (model, _) = train(cfg.arch, corpus.class_count, &train_set, &train_cfg)?;
    let path = cfg.output_dir.join(format!("{}.bin", role.stem()));
    save_checkpoint(&model, &path, Some(&train_cfg))?;
    Ok((
        accuracy(&model, &train_set)?,
        accuracy(&model, &test_set)?,
    ))
}

/// Sweep the scaler grid on the saved shadow model and write
/// `calibration.json` plus the sweep/histogram CSV files.
pub fn stage_calibrate(cfg: &ExperimentConfig) -> Result<CalibrationFile> {
    cfg.validate()?;
    let corpus = parse_dataset(cfg)?;
    let split = load_split(cfg, &corpus)?;
    let shadow = load_model(cfg, Role::Shadow)?;
    let seeds = RunSeeds::derive(cfg.master_seed, 0);

    let base = PerturbConfig {
        seed: seeds.shadow_perturb,
        ..cfg.perturb.clone()
    };
    let sweep = attack::estimate_scaler_and_threshold(
        &shadow,
        &corpus.select(&split.shadow_train),
        &corpus.select(&split.shadow_test),
        &base,
        &cfg.s_grid,
    )?;
    report::write_sweep_files(&cfg.output_dir, &sweep)?;
    let calibration = CalibrationFile {
        scaler: sweep.scaler,
        threshold: sweep.threshold,
        separable: sweep.separable,
        stopped_early: sweep.stopped_early,
        points: sweep.points,
    };
    let path = cfg.output_dir.join("calibration.json");
    std::fs::write(&path, serde_json::to_vec_pretty(&calibration)?)
        .map_err(|e| Error::io(&path, e))?;
    Ok(calibration)
}

/// `attack_results.json` contents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackResults {
    pub scaler: f64,
    pub threshold: f64,
    pub attack_acc: f64,
    pub attack_auc: f64,
    pub decisions: Vec<crate::attack::MembershipDecision>,
}

/// Run the calibrated attack against the saved target model over its
/// member/non-member evaluation set; writes `attack_results.json` and
/// `roc.csv`.
pub fn stage_attack(cfg: &ExperimentConfig) -> Result<AttackResults> {
    cfg.validate()?;
    let corpus = parse_dataset(cfg)?;
    let split = load_split(cfg, &corpus)?;
    let target = load_model(cfg, Role::Target)?;
    let calibration_path = cfg.output_dir.join("calibration.json");
    let calibration: CalibrationFile = serde_json::from_slice(
        &std::fs::read(&calibration_path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::FileMissing {
                    path: calibration_path.clone(),
                }
            } else {
                Error::io(&calibration_path, e)
            }
        })?,
    )?;
    let seeds = RunSeeds::derive(cfg.master_seed, 0);

    let ctx = AttackContext {
        target: &target,
        perturb: PerturbConfig {
            seed: seeds.target_perturb,
            scaler: calibration.scaler,
            ..cfg.perturb.clone()
        },
        threshold: calibration.threshold,
    };
    let mut decisions = Vec::new();
    let mut verdicts = Vec::new();
    let mut truth = Vec::new();
    let mut records = Vec::new();
    for (idx_set, is_member) in [(&split.target_train, true), (&split.target_test, false)] {
        for g in corpus.select(idx_set) {
            let d = attack::infer_membership(g, &ctx)?;
            records.push(ScoreRecord {
                score: d.score,
                is_member,
            });
            verdicts.push(d.verdict);
            truth.push(is_member);
            decisions.push(d);
        }
    }
    let roc = roc_and_auc(&records)?;
    report::write_roc_csv(&cfg.output_dir, &roc)?;
    let results = AttackResults {
        scaler: calibration.scaler,
        threshold: calibration.threshold,
        attack_acc: attack_accuracy(&verdicts, &truth)?,
        attack_auc: roc.auc,
        decisions,
    };
    let path = cfg.output_dir.join("attack_results.json");
    std::fs::write(&path, serde_json::to_vec_pretty(&results)?)
        .map_err(|e| Error::io(&path, e))?;
    Ok(results)
}

/// `baselines.json` contents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineResults {
    pub target_train_acc: f64,
    pub target_test_acc: f64,
    pub train_test_gap: f64,
    pub gap_attack_acc: f64,
    pub gap_attack_expected: f64,
    pub celoss_auc: f64,
    pub mentr_auc: f64,
}

/// Evaluate the gap attack and both probability-based baselines against
/// the saved target model; writes `baselines.json`.
pub fn stage_baselines(cfg: &ExperimentConfig) -> Result<BaselineResults> {
    cfg.validate()?;
    let corpus = parse_dataset(cfg)?;
    let split = load_split(cfg, &corpus)?;
    let target = load_model(cfg, Role::Target)?;

    let members = corpus.select(&split.target_train);
    let nonmembers = corpus.select(&split.target_test);
    let mut gap_decisions = Vec::new();
    let mut truth = Vec::new();
    for (set, is_member) in [(&members, true), (&nonmembers, false)] {
        for g in set.iter() {
            gap_decisions.push(gap_attack(g, &target)?);
            truth.push(is_member);
        }
    }
    let train_acc = accuracy(&target, &members)?;
    let test_acc = accuracy(&target, &nonmembers)?;
    let celoss = negated_probability_records(&target, &members, &nonmembers, celoss_score)?;
    let mentr = negated_probability_records(&target, &members, &nonmembers, mentr_score)?;
    let results = BaselineResults {
        target_train_acc: train_acc,
        target_test_acc: test_acc,
        train_test_gap: train_acc - test_acc,
        gap_attack_acc: attack_accuracy(&gap_decisions, &truth)?,
        gap_attack_expected: gap_attack_expected_acc(train_acc, test_acc),
        celoss_auc: roc_and_auc(&celoss)?.auc,
        mentr_auc: roc_and_auc(&mentr)?.auc,
    };
    let path = cfg.output_dir.join("baselines.json");
    std::fs::write(&path, serde_json::to_vec_pretty(&results)?)
        .map_err(|e| Error::io(&path, e))?;
    Ok(results)
}
