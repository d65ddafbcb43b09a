//! Scenario runner for `affine-core`: TOML scenarios in, hashed CSV/JSON tables out.

pub mod audit;
pub mod config;
pub mod error;
pub mod runner;
pub mod table;

pub use audit::{audit_table, AuditReport};
pub use config::{config_hash, load_batch, load_config, to_toml, ScenarioConfig, ScenarioKind};
pub use error::{CliError, CliResult};
pub use runner::run_scenario;
pub use table::{export_table, Cell, Column, ColumnType, Format, LoadedTable, ResultTable};
