//! Run configuration. Every knob can come from a flag, from a TOML file
//! passed with `--config`, or from the defaults below, in that order.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Values read from the config file. All optional; missing keys fall back
/// to the defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<String>,
    pub depth: Option<u32>,
    pub margin: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub mode: Option<String>,
    pub bound: Option<String>,
    pub threads: Option<usize>,
    pub deterministic: Option<bool>,
    pub node_budget: Option<u64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: String,
    pub depth: u32,
    pub margin: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub mode: String,
    pub bound: String,
    pub threads: Option<usize>,
    pub deterministic: bool,
    pub node_budget: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: "sun".into(),
            depth: 6,
            margin: 1,
            n_min: 2,
            n_max: 18,
            mode: "verify".into(),
            bound: "degree".into(),
            threads: None,
            deterministic: true,
            node_budget: 1_000_000_000,
            out: None,
        }
    }
}

/// Flag values as parsed; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub seed: Option<String>,
    pub depth: Option<u32>,
    pub margin: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub mode: Option<String>,
    pub bound: Option<String>,
    pub threads: Option<usize>,
    pub deterministic: Option<bool>,
    pub node_budget: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(flags: Flags, file: FileConfig) -> Result<Self, CliError> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            depth: flags.depth.or(file.depth).unwrap_or(d.depth),
            margin: flags.margin.or(file.margin).unwrap_or(d.margin),
            n_min: flags.n_min.or(file.n_min).unwrap_or(d.n_min),
            n_max: flags.n_max.or(file.n_max).unwrap_or(d.n_max),
            mode: flags.mode.or(file.mode).unwrap_or(d.mode),
            bound: flags.bound.or(file.bound).unwrap_or(d.bound),
            threads: flags.threads.or(file.threads),
            deterministic: flags.deterministic.or(file.deterministic).unwrap_or(d.deterministic),
            node_budget: flags.node_budget.or(file.node_budget).unwrap_or(d.node_budget),
            out: flags.out.or(file.out),
        };
        if cfg.n_min > cfg.n_max {
            return Err(CliError::Usage(format!("n range {}..{} is empty", cfg.n_min, cfg.n_max)));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file: FileConfig = toml::from_str("depth = 4\nmargin = 2\nseed = \"king\"").unwrap();
        let flags = Flags {
            depth: Some(7),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(flags, file).unwrap();
        assert_eq!(cfg.depth, 7);
        assert_eq!(cfg.margin, 2);
        assert_eq!(cfg.seed, "king");
        assert_eq!(cfg.n_max, 18);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
    }

    #[test]
    fn empty_range_rejected() {
        let flags = Flags {
            n_min: Some(9),
            n_max: Some(3),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(flags, FileConfig::default()).is_err());
    }
}
