//! Config-driven runner around `mls-core`. Every subcommand builds its report
//! files in memory, then writes them under the output directory, so the
//! bytes on disk depend only on the config and seed.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;

use thiserror::Error;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use output::Outputs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mls_core::Error),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 1 config, 2 precondition (and anything else), 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Core(mls_core::Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

/// Runs `f` on a dedicated pool with `workers` threads (0 = rayon default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    Ok(pool.install(f))
}
