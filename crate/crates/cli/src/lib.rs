//! Config-driven scenarios over `cmv-core`: solves, identity checks, kernel
//! checks, reconstruction and OLP dumps, with JSON reports.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{parse_document, Backend, Num, ScenarioConfig, ScenarioKind};
pub use error::CliError;
pub use report::{Payload, Report, Status};
pub use run::{run_captured, run_scenario, sweep};
