//! Configuration, orchestration and report emission for the `posaffine`
//! command-line tool.

pub mod commands;
pub mod config;
mod error;
pub mod pipeline;

pub use commands::{dispatch, Cli, Command, Outcome};
pub use config::{Backend, RunConfig};
pub use error::{AnyError, CliError, EXIT_AMBIGUOUS, EXIT_CONFIG, EXIT_FAIL, EXIT_OTHER};
pub use pipeline::{run_pipeline, RunReport};
