//! End-to-end checks of the `glomia` binary: every subcommand over a small
//! synthetic corpus, exit codes, and the JSON error contract.

use std::path::Path;
use std::process::{Command, Output};

fn glomia(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glomia"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_corpus(dir: &Path) {
    let corpus = glomia::synth::make_corpus(&glomia::synth::SynthConfig {
        graphs: 48,
        classes: 2,
        class_separation: 0.3,
        noise: 0.4,
        seed: 99,
        ..Default::default()
    });
    glomia::tud::export_corpus(&corpus, &dir.join("corpus")).unwrap();
}

fn write_config(dir: &Path) {
    std::fs::write(
        dir.join("exp.conf"),
        "dataset.name = synthetic\n\
         dataset.path = corpus\n\
         model.arch = sage\n\
         train.epochs = 80\n\
         train.hidden_dim = 8\n\
         perturb.n_copies = 40\n\
         attack.s_grid = 0.5,1.0,2.0\n\
         experiment.repetitions = 1\n\
         experiment.master_seed = 5\n\
         output.dir = out\n",
    )
    .unwrap();
}

#[test]
fn parse_subcommand_reports_stats() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path());
    let out = glomia(
        &["parse", "--dataset", "corpus", "--name", "synthetic", "--stats"],
        dir.path(),
    );
    let json = stdout_json(&out);
    assert_eq!(json["graphs"], 48);
    assert_eq!(json["classes"], 2);
    assert!(json["avg_nodes"].as_f64().unwrap() > 0.0);
}

#[test]
fn stagewise_pipeline_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path());
    write_config(dir.path());

    let out = glomia(&["train", "--config", "exp.conf", "--role", "target"], dir.path());
    let json = stdout_json(&out);
    assert!(json["train_acc"].as_f64().unwrap() >= 0.0);
    assert!(dir.path().join("out/target_model.bin").exists());
    assert!(dir.path().join("out/target_model.json").exists());
    assert!(dir.path().join("out/split.json").exists());

    stdout_json(&glomia(
        &["train", "--config", "exp.conf", "--role", "shadow"],
        dir.path(),
    ));

    let json = stdout_json(&glomia(&["calibrate", "--config", "exp.conf"], dir.path()));
    assert!(json["scaler"].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("out/calibration.json").exists());
    assert!(dir.path().join("out/sweep_0.5.csv").exists());
    assert!(dir.path().join("out/hist_0.5.csv").exists());

    let json = stdout_json(&glomia(&["attack", "--config", "exp.conf"], dir.path()));
    assert_eq!(json["graphs_evaluated"], 24);
    assert!(dir.path().join("out/attack_results.json").exists());
    assert!(dir.path().join("out/roc.csv").exists());

    let json = stdout_json(&glomia(&["baselines", "--config", "exp.conf"], dir.path()));
    assert!(json["gap_attack_acc"].as_f64().unwrap() >= 0.0);
    assert!(dir.path().join("out/baselines.json").exists());
}

#[test]
fn run_subcommand_emits_report_files() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path());
    write_config(dir.path());

    let json = stdout_json(&glomia(&["run", "--config", "exp.conf"], dir.path()));
    assert_eq!(json["successful_runs"], 1);
    for file in ["report.json", "summary.csv", "roc.csv"] {
        assert!(dir.path().join("out").join(file).exists(), "{file}");
    }
    let summary = std::fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert!(summary.starts_with(
        "dataset,model,train_test_gap,glo_mia_acc,gap_attack_acc,glo_mia_auc,celoss_auc,mentr_auc"
    ));
}

#[test]
fn global_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path());
    write_config(dir.path());

    stdout_json(&glomia(
        &["train", "--config", "exp.conf", "--role", "target", "--out", "elsewhere", "--seed", "123"],
        dir.path(),
    ));
    assert!(dir.path().join("elsewhere/target_model.bin").exists());
    assert!(!dir.path().join("out/target_model.bin").exists());
}

#[test]
fn errors_exit_nonzero_with_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();

    // missing corpus directory
    let out = glomia(
        &["parse", "--dataset", "nowhere", "--name", "ghost"],
        dir.path(),
    );
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["kind"], "file_missing");
    assert!(err["error"].as_str().unwrap().contains("ghost"));

    // attack before training
    write_corpus(dir.path());
    write_config(dir.path());
    let out = glomia(&["attack", "--config", "exp.conf"], dir.path());
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "file_missing");

    // malformed config
    std::fs::write(dir.path().join("bad.conf"), "nonsense\n").unwrap();
    let out = glomia(&["run", "--config", "bad.conf"], dir.path());
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "config");
}
