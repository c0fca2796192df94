//! Seeded Monte Carlo checks for subword statistics.
//!
//! Words are drawn from either random model, the requested statistics are
//! counted with a shared prefix trie, and their scaled values are reduced to
//! means, covariances and second moments with standard errors. Every sample
//! draws from its own ChaCha8 stream, so results do not depend on the number
//! of worker threads.

mod counter;
mod distribution;
mod output;
mod sample;
mod simulate;

pub use counter::PatternCounter;
pub use distribution::{ks_distance, logistic_cdf};
pub use output::write_csv;
pub use sample::{sample_multi, sample_one, sample_rng};
pub use simulate::{
    estimate_covariance, simulate_values, ModelSpec, MomentEstimate, SimStatistic, SimulationConfig,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum McError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Exact(#[from] wordstat::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, McError>;
