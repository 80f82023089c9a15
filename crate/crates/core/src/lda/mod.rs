//! Latent Dirichlet allocation fit by collapsed Gibbs sampling.
//!
//! [`LdaState`] holds the topic assignment of every token together with the
//! document–topic, word–topic and topic-total count tables; a sweep resamples
//! each token from its conditional with that token removed from all counts.
//! [`train`] runs a chain and reads out smoothed `phi`/`theta`, and
//! [`sweep_topics`] fits one chain per candidate topic count and keeps the
//! count with the highest final `log P(w | z)`.

mod likelihood;
mod model;
mod select;
mod state;

use thiserror::Error;

pub use likelihood::{ln_gamma, log_likelihood};
pub use model::{read_model_dump, train, write_ll_trace, write_model_dump, ModelDump, TrainedModel};
pub use select::{derive_seed, sweep_topics, SweepConfig, SweepEntry, SweepResult};
pub use state::{CountTables, LdaState};

pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_BURN_IN: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
/// Log-likelihood is recorded every this many sweeps.
pub const TRACE_EVERY: usize = 10;

#[derive(Debug, Error)]
pub enum LdaError {
    #[error("invalid LDA configuration: {0}")]
    InvalidConfig(String),
    #[error("assignments do not match the corpus: {0}")]
    BadAssignments(String),
    #[error("topic grid is empty")]
    EmptyGrid,
    #[error("malformed model dump: {0}")]
    MalformedDump(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Hyperparameters and run length for one chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaConfig {
    pub topics: usize,
    /// Symmetric document–topic prior.
    pub alpha: f64,
    /// Symmetric topic–word prior.
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// Defaults: `alpha = 50 / K`, `beta = 0.01`, 1000 sweeps with 200 burn-in, seed 42.
    pub fn new(topics: usize) -> LdaConfig {
        LdaConfig {
            topics,
            alpha: default_alpha(topics),
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<(), LdaError> {
        let bad = |msg: String| Err(LdaError::InvalidConfig(msg));
        if self.topics == 0 {
            return bad("number of topics must be at least 1".into());
        }
        if self.topics > u32::MAX as usize {
            return bad(format!("too many topics: {}", self.topics));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad(format!("alpha must be positive and finite, got {}", self.alpha));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad(format!("beta must be positive and finite, got {}", self.beta));
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if self.burn_in >= self.iterations {
            return bad(format!("burn-in {} must be less than iterations {}", self.burn_in, self.iterations));
        }
        Ok(())
    }
}

pub fn default_alpha(topics: usize) -> f64 {
    50.0 / topics.max(1) as f64
}
