//! Configuration, result files and subcommands behind the `pcdec` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;
