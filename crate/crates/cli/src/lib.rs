//! Configuration, reports and commands behind the `qfock` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{execute, Command};
pub use config::{Config, ConfigFile, CONFIG_SCHEMA};
pub use report::{Report, REPORT_SCHEMA};
