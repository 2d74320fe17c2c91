//! Command orchestration, JSON formats and reports for the `hyperzeta`
//! binary.

pub mod commands;
pub mod input;
pub mod report;

use std::path::PathBuf;

use hyperzeta::covering::DEFAULT_GROUP_CAP;
use hyperzeta::cycles::DEFAULT_CLASS_CAP;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed ({}): {detail}", failures.join(", "))]
    Precondition { failures: Vec<String>, detail: String },
    #[error("bad voltage: {0}")]
    Voltage(String),
    #[error("identity check failed: {0}")]
    Disagreement(String),
    #[error("representation invalid: {0}")]
    Representation(String),
    #[error("explosion guard: {0}")]
    Explosion(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition { .. } => 3,
            CliError::Voltage(_) => 4,
            CliError::Disagreement(_) => 5,
            CliError::Representation(_) => 6,
            CliError::Explosion(_) => 7,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Precondition { .. } => "precondition",
            CliError::Voltage(_) => "voltage",
            CliError::Disagreement(_) => "disagreement",
            CliError::Representation(_) => "representation",
            CliError::Explosion(_) => "explosion-guard",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub order: usize,
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub ihara: bool,
    pub json: bool,
    pub timing: bool,
    pub group_cap: usize,
    pub class_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 8,
            samples: 25,
            tolerance: 1e-8,
            seed: 0,
            out: None,
            ihara: false,
            json: false,
            timing: true,
            group_cap: DEFAULT_GROUP_CAP,
            class_cap: DEFAULT_CLASS_CAP,
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0) {
            return Err(CliError::Parse(format!("--tol must be positive, got {}", self.tolerance)));
        }
        if self.samples == 0 {
            return Err(CliError::Parse("--samples must be at least 1".into()));
        }
        Ok(())
    }

    pub fn sample_options(&self) -> hyperzeta::zeta::SampleOptions {
        hyperzeta::zeta::SampleOptions { count: self.samples, tolerance: self.tolerance, seed: self.seed }
    }
}

/// Result of one command: a JSON report, a human summary and an exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub report: serde_json::Value,
    pub text: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let pre = CliError::Precondition { failures: vec!["no loops".into()], detail: String::new() };
        let all = [
            CliError::Parse(String::new()),
            pre,
            CliError::Voltage(String::new()),
            CliError::Disagreement(String::new()),
            CliError::Representation(String::new()),
            CliError::Explosion(String::new()),
        ];
        assert_eq!(all.iter().map(CliError::exit_code).collect::<Vec<_>>(), [2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn config_checks() {
        assert!(RunConfig::default().check().is_ok());
        assert!(RunConfig { tolerance: 0.0, ..Default::default() }.check().is_err());
        assert!(RunConfig { tolerance: f64::NAN, ..Default::default() }.check().is_err());
        assert!(RunConfig { samples: 0, ..Default::default() }.check().is_err());
    }
}
