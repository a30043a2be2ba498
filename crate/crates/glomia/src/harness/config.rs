//! Flat key-value experiment configuration.
//!
//! The format is line-oriented text: `section.key = value`, `#` starts a
//! comment, blank lines are ignored. Unknown keys are hard errors. The
//! schema (defaults in parentheses):
//!
//! ```text
//! dataset.name = ENZYMES            # required
//! dataset.path = data/ENZYMES       # required
//! dataset.feature_mode = attributes_only   (picked from the files present)
//! model.arch = gcn                  # required: gcn | gat | sage | gin
//! train.epochs = 3500               (3500)
//! train.lr = 0.005                  (0.005)
//! train.hidden_dim = 32             (32)
//! perturb.n_copies = 1000           (1000)
//! perturb.r_min = 0.1               (0.1)
//! perturb.r_max = 0.5               (0.5)
//! attack.s_grid = 0.1,0.3,...       (0.1,0.3,0.5,1.0,1.5,2.0,3.0,5.0,10.0,15.0,20.0)
//! experiment.repetitions = 5        (5)
//! experiment.master_seed = 0        (0)
//! output.dir = out                  (out)
//! ```

use crate::error::{Error, Result};
use crate::gnn::{Arch, TrainConfig};
use crate::perturb::PerturbConfig;
use crate::tud::FeatureMode;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Where a corpus lives and how its features are assembled.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetConfig {
    pub name: String,
    pub path: PathBuf,
    /// None means: choose by the files present in the directory.
    pub feature_mode: Option<FeatureMode>,
}

/// Everything one experiment needs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub arch: Arch,
    pub train: TrainConfig,
    pub perturb: PerturbConfig,
    pub s_grid: Vec<f64>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

/// The scaler grid used when a config does not override it.
pub fn default_s_grid() -> Vec<f64> {
    vec![0.1, 0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 15.0, 20.0]
}

impl ExperimentConfig {
    /// Minimal config for a dataset/arch pair, everything else default.
    pub fn new(name: &str, path: impl Into<PathBuf>, arch: Arch) -> Self {
        ExperimentConfig {
            dataset: DatasetConfig {
                name: name.to_string(),
                path: path.into(),
                feature_mode: None,
            },
            arch,
            train: TrainConfig::default(),
            perturb: PerturbConfig::default(),
            s_grid: default_s_grid(),
            repetitions: 5,
            master_seed: 0,
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".to_string()));
        }
        if self.s_grid.is_empty() {
            return Err(Error::Config("attack.s_grid must not be empty".to_string()));
        }
        self.perturb.validate()
    }
}

/// Parse a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileMissing { path: path.into() }
        } else {
            Error::io(path, e)
        }
    })?;
    parse_config(&text)
}

/// Parse config text. See the module doc for the schema.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                line_no + 1
            )));
        };
        let key = key.trim().to_string();
        if values
            .insert(key.clone(), value.trim().to_string())
            .is_some()
        {
            return Err(Error::Config(format!("duplicate key {key}")));
        }
    }

    let mut take = |k: &str| values.remove(k);
    let required = |v: Option<String>, k: &str| {
        v.ok_or_else(|| Error::Config(format!("missing required key {k}")))
    };

    fn num<T: std::str::FromStr>(v: Option<String>, key: &str, default: T) -> Result<T> {
        match v {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("bad value for {key}: {s:?}"))),
        }
    }

    let dataset = DatasetConfig {
        name: required(take("dataset.name"), "dataset.name")?,
        path: PathBuf::from(required(take("dataset.path"), "dataset.path")?),
        feature_mode: take("dataset.feature_mode")
            .map(|s| FeatureMode::parse(&s))
            .transpose()?,
    };
    let arch = Arch::parse(&required(take("model.arch"), "model.arch")?)?;

    let train = TrainConfig {
        epochs: num(take("train.epochs"), "train.epochs", 3500)?,
        lr: num(take("train.lr"), "train.lr", 0.005)?,
        hidden_dim: num(take("train.hidden_dim"), "train.hidden_dim", 32)?,
        seed: 0, // derived from the master seed per repetition
    };
    let perturb = PerturbConfig {
        n_copies: num(take("perturb.n_copies"), "perturb.n_copies", 1000)?,
        r_min: num(take("perturb.r_min"), "perturb.r_min", 0.1)?,
        r_max: num(take("perturb.r_max"), "perturb.r_max", 0.5)?,
        scaler: 1.0, // calibrated later
        seed: 0,     // derived
    };

    let s_grid = match take("attack.s_grid") {
        None => default_s_grid(),
        Some(s) => s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad scaler in attack.s_grid: {tok:?}")))
            })
            .collect::<Result<Vec<f64>>>()?,
    };

    let cfg = ExperimentConfig {
        dataset,
        arch,
        train,
        perturb,
        s_grid,
        repetitions: num(take("experiment.repetitions"), "experiment.repetitions", 5)?,
        master_seed: num(take("experiment.master_seed"), "experiment.master_seed", 0)?,
        output_dir: PathBuf::from(
            take("output.dir").unwrap_or_else(|| "out".to_string()),
        ),
    };

    if let Some(unknown) = values.keys().next() {
        return Err(Error::Config(format!("unknown key {unknown}")));
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "dataset.name = ENZYMES\ndataset.path = data/ENZYMES\nmodel.arch = gcn\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.train.epochs, 3500);
        assert_eq!(cfg.train.hidden_dim, 32);
        assert_eq!(cfg.perturb.n_copies, 1000);
        assert_eq!(cfg.repetitions, 5);
        assert_eq!(cfg.s_grid, default_s_grid());
        assert_eq!(cfg.arch, Arch::Gcn);
        assert!(cfg.dataset.feature_mode.is_none());
    }

    #[test]
    fn overrides_and_comments() {
        let text = "# experiment\ndataset.name = DD\ndataset.path = data/DD\n\
                    dataset.feature_mode = onehot_node_labels\nmodel.arch = sage\n\
                    train.epochs = 50   # short run\nattack.s_grid = 0.5, 1.5\n\
                    experiment.master_seed = 99\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.train.epochs, 50);
        assert_eq!(cfg.s_grid, vec![0.5, 1.5]);
        assert_eq!(cfg.master_seed, 99);
        assert_eq!(cfg.dataset.feature_mode, Some(crate::tud::FeatureMode::OnehotNodeLabels));
        assert_eq!(cfg.arch, Arch::Sage);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{MINIMAL}bogus.key = 1\n");
        assert!(matches!(parse_config(&text), Err(Error::Config(_))));
    }

    #[test]
    fn missing_required_key_is_rejected() {
        assert!(matches!(
            parse_config("dataset.name = X\nmodel.arch = gcn\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn malformed_line_is_rejected() {
        let text = format!("{MINIMAL}this is not a key value pair\n");
        assert!(matches!(parse_config(&text), Err(Error::Config(_))));
    }

    #[test]
    fn bad_number_is_rejected() {
        let text = format!("{MINIMAL}train.epochs = many\n");
        assert!(matches!(parse_config(&text), Err(Error::Config(_))));
    }
}
