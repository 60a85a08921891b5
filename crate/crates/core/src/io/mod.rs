//! File formats, bundled fixtures and report rendering.

mod config;
mod decimal;
mod report;
mod table;

use std::path::Path;

use thiserror::Error;

pub use config::{parse_alpha_range, ConfigError, RunConfig, ServiceKind, SimSection};
pub use decimal::{decimal_from_f64, parse_decimal, DecimalError};
pub use report::{
    emit_balance, emit_comparison, emit_plot_data, emit_robust, emit_sim, parse_plot_data, Format, PlotRow,
    SimReport,
};
pub use table::{emit_tasks, parse_deviations, parse_tasks, DeviationKind, DeviationRow, DeviationTable, ParseError};

use crate::model::Task;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Config {
        path: String,
        #[source]
        source: ConfigError,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, IoError> {
    std::fs::read(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a task table from disk, keeping file order.
pub fn load_tasks(path: impl AsRef<Path>) -> Result<Vec<Task>, IoError> {
    let path = path.as_ref();
    parse_tasks(&read(path)?).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_deviations(path: impl AsRef<Path>) -> Result<DeviationTable, IoError> {
    let path = path.as_ref();
    parse_deviations(&read(path)?).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_run_config(path: impl AsRef<Path>) -> Result<RunConfig, IoError> {
    let path = path.as_ref();
    RunConfig::parse(&read(path)?).map_err(|source| IoError::Config {
        path: path.display().to_string(),
        source,
    })
}

/// Data sets shipped with the crate.
pub mod fixtures {
    use super::{parse_deviations, parse_tasks, DeviationTable};
    use crate::model::{ModelError, ProcessPlan, Task};

    /// Shirt main-assembly tasks (19 hanger-line operations, 1090 s).
    pub const SHIRT_MAIN_ASSEMBLY: &str = include_str!("../../fixtures/shirt_main_assembly.csv");
    /// Upper/lower effective cycle times of the 32-seat shirt line.
    pub const SHIRT_DEVIATIONS: &str = include_str!("../../fixtures/shirt_deviations.csv");
    /// Seat count of the case-study hanger line.
    pub const SHIRT_LINE_SEATS: u32 = 32;

    pub fn shirt_tasks() -> Vec<Task> {
        parse_tasks(SHIRT_MAIN_ASSEMBLY.as_bytes()).expect("bundled fixture parses")
    }

    pub fn shirt_plan(seats: u32) -> Result<ProcessPlan, ModelError> {
        ProcessPlan::new(shirt_tasks(), seats)
    }

    pub fn shirt_deviations() -> DeviationTable {
        parse_deviations(SHIRT_DEVIATIONS.as_bytes()).expect("bundled fixture parses")
    }
}
