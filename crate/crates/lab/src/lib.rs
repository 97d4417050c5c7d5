//! Seeded verification runs over the bound checks of `schwarz-core`: run
//! configuration, space rosters, instance generation and JSON reports.

pub mod config;
pub mod roster;
pub mod run;

pub use config::{ConfigError, RunConfig, SpaceSpec, TheoremSelection};
pub use run::{run, run_with_threads, RunReport, TagSummary};
