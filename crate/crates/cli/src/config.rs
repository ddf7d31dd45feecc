//! The JSON run configuration. Every field is optional; command-line flags
//! take precedence over file values, which take precedence over defaults.

use std::path::PathBuf;

use orlicz_core::verify::CheckConfig;
use serde::Deserialize;

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub bits: Option<u32>,
    pub n_max: Option<u32>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub digits: Option<usize>,
    pub eval: EvalSection,
    pub verify: Option<CheckConfig>,
    pub analyze: AnalyzeSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub points: Vec<String>,
    pub n: Option<u32>,
    pub x: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeSection {
    pub model: Option<String>,
    pub p_grid: Option<Vec<String>>,
    pub ranges: Option<Vec<String>>,
    pub density: Option<usize>,
    pub t: Option<Vec<String>>,
    pub c: Option<String>,
    pub n: Option<String>,
    pub scales: Option<Vec<String>>,
    pub grid: Option<Vec<String>>,
    pub m_list: Option<Vec<u32>>,
    pub values: Option<Vec<String>>,
    pub measures: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Settings shared by every subcommand after merging.
#[derive(Debug, Clone)]
pub struct Common {
    pub bits: u32,
    pub n_max: Option<u32>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub digits: usize,
}

pub const DEFAULT_DIGITS: usize = 17;

impl Common {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(8..=1 << 16).contains(&self.bits) {
            return Err(CliError::Usage(format!(
                "--bits {} is outside the supported range 8..=65536",
                self.bits
            )));
        }
        if !(3..=60).contains(&self.digits) {
            return Err(CliError::Usage("--digits must lie in 3..=60".into()));
        }
        Ok(())
    }
}
