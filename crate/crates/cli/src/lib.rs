//! Command-line front end, configuration files and table output for
//! `srsqueeze-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod montecarlo;
pub mod output;
