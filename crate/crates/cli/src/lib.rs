//! Scenario runner for the geometric-calculus checks: TOML scenario files,
//! the patch and field registries, and CSV reports.

pub mod registry;
pub mod run;
pub mod scenario;

pub use run::{run_scenario, write_csv, write_outcome, Outcome, RunError, RunOptions};
pub use scenario::{parse_scenario, print_scenario, Check, ConfigError, Scenario};
