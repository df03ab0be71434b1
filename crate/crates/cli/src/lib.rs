//! Scenario files in, delimiter-separated tables out.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use commands::{run_command, Command, CommandOutput, RunOptions};
pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;
pub use table::{config_hash, emit_plot_data, Cell, ResultTable};
