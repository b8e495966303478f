//! Library backing the `sishd` binary: scenario configs, batch execution,
//! published-table reproduction, and CSV/SVG emission.

use thiserror::Error;

pub mod batch;
pub mod config;
pub mod csv_out;
pub mod svg;
pub mod tables;

/// Failure classes, each mapped to a process exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Bad configuration or arguments: parse failures, invalid parameters.
    #[error("{0}")]
    Config(String),
    /// The numerics failed: non-finite values, positivity breach, or a
    /// trajectory that cannot support pricing.
    #[error("{0}")]
    Numerical(String),
    /// A reproduced table deviated from its published values beyond the
    /// recorded tolerance.
    #[error("{0}")]
    TableDeviation(String),
    /// Filesystem trouble, reported with path context.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// Process exit code for this failure: 1 for configuration and I/O
    /// problems, 2 for numerical failures, 3 for table deviations.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::TableDeviation(_) => 3,
        }
    }
}

impl From<sishd_core::model::ModelError> for CliError {
    fn from(e: sishd_core::model::ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<sishd_core::simulate::SimError> for CliError {
    fn from(e: sishd_core::simulate::SimError) -> Self {
        match e {
            sishd_core::simulate::SimError::InvalidConfig { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<sishd_core::actuarial::ActuarialError> for CliError {
    fn from(e: sishd_core::actuarial::ActuarialError) -> Self {
        match e {
            sishd_core::actuarial::ActuarialError::InvalidBenefit { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
