//! Scenario runner: TOML configs in, CSV tables and a metadata file out.

pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;

pub use config::{default_config, load_config, parse_config, OrderName, Overrides, Scenario, ScenarioConfig};
pub use error::{CliError, CliResult};
pub use scenarios::{run_scenario, RunReport};
