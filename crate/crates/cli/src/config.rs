use std::fs;
use std::path::{Path, PathBuf};

use rqc_moments::{Error, Result};
use serde::Deserialize;

use crate::args::{ArchArg, Format, LevelArg};

/// Flat JSON config; keys mirror the long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    #[serde(alias = "sites")]
    pub n: Option<usize>,
    #[serde(alias = "dim")]
    pub d: Option<usize>,
    pub arch: Option<ArchArg>,
    pub e: Option<f64>,
    pub g: Option<f64>,
    pub numeric: Option<bool>,
    pub canonical: Option<[f64; 3]>,
    pub file: Option<PathBuf>,
    pub random: Option<usize>,
    #[serde(alias = "e-range")]
    pub e_range: Option<String>,
    #[serde(alias = "g-range")]
    pub g_range: Option<String>,
    pub resolution: Option<usize>,
    #[serde(alias = "solvable-line")]
    pub solvable_line: Option<bool>,
    #[serde(alias = "t-max")]
    pub t_max: Option<usize>,
    pub level: Option<LevelArg>,
    #[serde(alias = "tamper-dispersion")]
    pub tamper_dispersion: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}

/// Parses `min:max`.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let (lo, hi) =
        text.split_once(':').ok_or_else(|| Error::Parse(format!("range '{text}' must look like min:max")))?;
    let parse =
        |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("range '{text}' has a non-numeric bound")));
    Ok((parse(lo)?, parse(hi)?))
}

/// Collects every problem with a configuration before any computation starts.
#[derive(Debug, Default)]
pub struct Problems(Vec<String>);

impl Problems {
    pub fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    pub fn require<T>(&mut self, value: Option<T>, name: &str) -> Option<T> {
        if value.is_none() {
            self.push(format!("missing --{name}"));
        }
        value
    }

    /// Shared range checks for a local dimension and an `(e, g)` point.
    pub fn check_point(&mut self, d: usize, e: Option<f64>, g: Option<f64>) {
        if d < 2 {
            self.push(format!("--dim must be at least 2, got {d}"));
        }
        if let Some(e) = e.filter(|e| !(0.0..=1.0).contains(e)) {
            self.push(format!("--e must lie in [0, 1], got {e}"));
        }
        if let Some(g) = g.filter(|g| !(0.0..=1.0).contains(g)) {
            self.push(format!("--g must lie in [0, 1], got {g}"));
        }
    }

    pub fn finish(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(self.0.join("; ")))
        }
    }
}
