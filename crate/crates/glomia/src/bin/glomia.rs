//! Command-line front end for the attack pipeline.
//!
//! Every subcommand except `parse` is driven by a config file (see the
//! `harness::config` module docs for the schema). `--seed` and `--out`
//! override the config's master seed and output directory. Errors exit
//! nonzero with a one-line JSON object on stderr.

use clap::{Parser, Subcommand};
use glomia::harness::{self, ExperimentConfig, Role};
use glomia::tud::{corpus_stats, default_feature_mode, parse_corpus, FeatureMode};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "glomia", version, about = "Label-only membership inference against graph classifiers")]
struct Cli {
    /// Override experiment.master_seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override output.dir from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a corpus directory and optionally print its statistics.
    Parse {
        /// Directory holding the corpus files.
        #[arg(long)]
        dataset: PathBuf,
        /// Corpus name (the file prefix).
        #[arg(long)]
        name: String,
        /// attributes_only | onehot_node_labels | concat_attributes_and_onehot
        #[arg(long)]
        feature_mode: Option<String>,
        /// Print graph/class counts and node/edge averages.
        #[arg(long)]
        stats: bool,
    },
    /// Train the target or shadow model and save its checkpoint.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// target | shadow
        #[arg(long)]
        role: String,
    },
    /// Sweep the perturbation scaler on the shadow model.
    Calibrate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the calibrated attack against the target model.
    Attack {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the gap attack and probability-based baselines.
    Baselines {
        #[arg(long)]
        config: PathBuf,
    },
    /// Full pipeline: repetitions, averaging, report files.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(cli: &Cli, path: &PathBuf) -> glomia::Result<ExperimentConfig> {
    let mut cfg = harness::load_config(path)?;
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> glomia::Result<serde_json::Value> {
    match &cli.command {
        Command::Parse {
            dataset,
            name,
            feature_mode,
            stats,
        } => {
            let mode = match feature_mode {
                Some(s) => FeatureMode::parse(s)?,
                None => default_feature_mode(dataset, name),
            };
            let corpus = parse_corpus(dataset, name, mode)?;
            let mut out = json!({
                "name": corpus.name,
                "graphs": corpus.len(),
                "classes": corpus.class_count,
                "feature_mode": mode.as_str(),
                "feature_dim": corpus.feature_dim(),
            });
            if *stats {
                let s = corpus_stats(&corpus)?;
                out["avg_nodes"] = json!(round2(s.avg_nodes));
                out["avg_edges"] = json!(round2(s.avg_edges));
            }
            Ok(out)
        }
        Command::Train { config, role } => {
            let cfg = load(cli, config)?;
            let role = Role::parse(role)?;
            let (train_acc, test_acc) = harness::stage_train(&cfg, role)?;
            Ok(json!({
                "role": match role { Role::Target => "target", Role::Shadow => "shadow" },
                "train_acc": train_acc,
                "test_acc": test_acc,
                "train_test_gap": train_acc - test_acc,
                "out_dir": cfg.output_dir,
            }))
        }
        Command::Calibrate { config } => {
            let cfg = load(cli, config)?;
            let calibration = harness::stage_calibrate(&cfg)?;
            Ok(json!({
                "scaler": calibration.scaler,
                "threshold": calibration.threshold,
                "separable": calibration.separable,
                "stopped_early": calibration.stopped_early,
                "points_visited": calibration.points.len(),
            }))
        }
        Command::Attack { config } => {
            let cfg = load(cli, config)?;
            let results = harness::stage_attack(&cfg)?;
            Ok(json!({
                "attack_acc": results.attack_acc,
                "attack_auc": results.attack_auc,
                "scaler": results.scaler,
                "threshold": results.threshold,
                "graphs_evaluated": results.decisions.len(),
            }))
        }
        Command::Baselines { config } => {
            let cfg = load(cli, config)?;
            let b = harness::stage_baselines(&cfg)?;
            Ok(serde_json::to_value(&b)?)
        }
        Command::Run { config } => {
            let cfg = load(cli, config)?;
            let report = harness::run_experiment(&cfg)?;
            harness::emit_report(&report, &cfg.output_dir)?;
            Ok(json!({
                "dataset": report.config.dataset.name,
                "model": report.config.arch.to_string(),
                "repetitions": report.runs.len(),
                "successful_runs": report.successful_runs,
                "train_test_gap": report.mean.train_test_gap,
                "glo_mia_acc": report.mean.attack_acc,
                "gap_attack_acc": report.mean.gap_attack_acc,
                "glo_mia_auc": report.mean.attack_auc,
                "celoss_auc": report.mean.celoss_auc,
                "mentr_auc": report.mean.mentr_auc,
                "report": cfg.output_dir.join("report.json"),
            }))
        }
    }
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let err = json!({ "error": e.to_string(), "kind": e.kind() });
            eprintln!("{err}");
            ExitCode::FAILURE
        }
    }
}
