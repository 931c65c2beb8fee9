//! Run configuration: a single JSON document, overridable from the command line.

use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use telebench_core::circuit::DeviceParams;
use telebench_core::teleport::BenchmarkConfig;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceParams,
    /// Samples per Pauli setting; 0 is the analytic mode.
    pub shots: u64,
    /// Required when `shots > 0`.
    pub seed: Option<u64>,
    pub noise: bool,
    /// Directory for report files; without it only the summary is printed.
    pub out: Option<PathBuf>,
    pub format: Format,
    pub restarts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let bench = BenchmarkConfig::default();
        Self {
            device: bench.device,
            shots: bench.shots,
            seed: None,
            noise: bench.noise,
            out: None,
            format: Format::Json,
            restarts: bench.restarts,
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub noise: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub restarts: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            ErrorKind::NotFound => {
                CliError::Config(format!("config file not found: {}", path.display()))
            }
            _ => CliError::Config(format!("cannot read config {}: {e}", path.display())),
        })?;
        Self::parse(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Parses a config document; blank input yields the defaults.
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        serde_json::from_str(text)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.shots {
            self.shots = v;
        }
        if let Some(v) = o.seed {
            self.seed = Some(v);
        }
        if let Some(v) = o.noise {
            self.noise = v;
        }
        if let Some(v) = o.out {
            self.out = Some(v);
        }
        if let Some(v) = o.format {
            self.format = v;
        }
        if let Some(v) = o.restarts {
            self.restarts = v;
        }
    }

    /// Checks the config and creates the output directory if one is set.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.shots > 0 && self.seed.is_none() {
            return Err(CliError::Config(
                "a seed is required when shots > 0 (set \"seed\" or pass --seed)".into(),
            ));
        }
        self.device
            .validate()
            .map_err(|e| CliError::Config(format!("invalid device parameters: {e}")))?;
        if let Some(dir) = &self.out {
            std::fs::create_dir_all(dir).map_err(|e| {
                CliError::Config(format!(
                    "output directory {} is not writable: {e}",
                    dir.display()
                ))
            })?;
        }
        Ok(())
    }

    pub fn benchmark(&self) -> BenchmarkConfig {
        BenchmarkConfig {
            device: self.device.clone(),
            shots: self.shots,
            seed: self.seed.unwrap_or(0),
            noise: self.noise,
            restarts: self.restarts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_document_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
        assert_eq!(RunConfig::parse(" \n").unwrap(), RunConfig::default());
        assert_eq!(RunConfig::parse("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_field_reports_location() {
        let err = RunConfig::parse("{\n  \"shots\": 10,\n  \"shoots\": 3\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("shoots") && msg.contains("line 3"), "{msg}");
        let err = RunConfig::parse("{\"device\": {\"t1\": [1e-6], \"j\": 1}}").unwrap_err();
        assert!(err.to_string().contains("`j`"));
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg =
            RunConfig::parse("{\"shots\": 100, \"seed\": 4, \"format\": \"csv\"}").unwrap();
        cfg.apply(Overrides {
            shots: Some(0),
            noise: Some(true),
            ..Overrides::default()
        });
        assert_eq!(cfg.shots, 0);
        assert_eq!(cfg.seed, Some(4));
        assert!(cfg.noise);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn sampled_runs_need_a_seed() {
        let cfg = RunConfig {
            shots: 10,
            ..RunConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
        let cfg = RunConfig {
            seed: Some(1),
            ..cfg
        };
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn bad_device_is_a_config_error() {
        let mut cfg = RunConfig::default();
        cfg.device.t2_star[0] = 10.0;
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }
}
