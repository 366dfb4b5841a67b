//! Configuration-driven front end for `triad-core`.
//!
//! A run is described by one JSON file (see [`config::RunConfig`]). Scan modes
//! write `series.csv` (or `series.json`), `metadata.json` and `timestamp.txt`
//! into the output directory. `metadata.json` is itself a valid run
//! configuration; its `provenance` block is ignored when read back.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Format, Mode, RunConfig};
pub use error::CliError;
pub use run::{run, run_file, RunOptions, RunSummary};
