use std::fmt;

use serde_json::json;
use wreathcat_core::fdalg::FdAlgError;
use wreathcat_core::pmap::PmapError;
use wreathcat_core::{NcError, RingError, WreathError};

/// A failed command, carrying the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: unreadable file, malformed partition, unknown label (exit 2).
    Parse(String),
    /// A named mathematical hypothesis does not hold (exit 3).
    Hypothesis(String),
    /// Two independent computations disagree (exit 4).
    Divergence(String),
    /// A computed identity missed its tolerance (exit 5).
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Divergence(_) => 4,
            CliError::Tolerance(_) => 5,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Hypothesis(_) => "hypothesis",
            CliError::Divergence(_) => "divergence",
            CliError::Tolerance(_) => "tolerance",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Hypothesis(m) | CliError::Divergence(m) | CliError::Tolerance(m) => m,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"error": {"kind": self.kind(), "exit_code": self.exit_code(), "message": self.message()}})
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<NcError> for CliError {
    fn from(e: NcError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<FdAlgError> for CliError {
    fn from(e: FdAlgError) -> Self {
        match e {
            FdAlgError::Hypothesis(_) | FdAlgError::NotNormal(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<PmapError> for CliError {
    fn from(e: PmapError) -> Self {
        match e {
            PmapError::Hypothesis(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<WreathError> for CliError {
    fn from(e: WreathError) -> Self {
        match e {
            WreathError::Hypothesis(_) => CliError::Hypothesis(e.to_string()),
            WreathError::OracleDivergence { .. } => CliError::Divergence(e.to_string()),
            WreathError::NegativeDimension { .. } | WreathError::Overflow => CliError::Tolerance(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}
