//! Scenario files, JSON reports and the claim suite on top of `quadent-core`.

use serde::{Deserialize, Serialize};

pub mod report;
pub mod run;
pub mod scenario;
pub mod suite;
pub mod text;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] quadent_core::Error),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for anything wrong with the input, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Core(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// The computation contradicts the claimed value for a documented reason.
    Disagree,
    /// Nothing was asserted.
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Disagree => "DISAGREE",
            Status::Info => "INFO",
        }
    }

    pub fn judge(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, tolerance: DEFAULT_TOLERANCE }
    }
}
