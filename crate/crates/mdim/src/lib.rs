//! Experiment runner for `mdim-core`: JSON configs, CSV and JSON outputs,
//! run manifests with checksums, and the `mdim` command line.
//!
//! [`runner::run`] is the library entry point; the binary only parses flags.

pub mod config;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod manifest;
pub mod output;
pub mod runner;
pub mod statements;
pub mod systems;
