use std::path::PathBuf;

use cmv_core::CmvError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {reason}")]
    ConfigInvalid { field: String, reason: String },

    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: CmvError,
    },
}

impl CliError {
    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        CliError::ConfigInvalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// Config problems exit with 2, everything else with 1.
    pub fn is_config_error(&self) -> bool {
        matches!(self, CliError::ConfigInvalid { .. } | CliError::Parse { .. } | CliError::Read { .. })
    }
}
