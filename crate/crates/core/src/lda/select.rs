use rayon::prelude::*;

use super::{default_alpha, train, LdaConfig, LdaError, TrainedModel};
use super::{DEFAULT_BETA, DEFAULT_BURN_IN, DEFAULT_ITERATIONS, DEFAULT_SEED};
use crate::corpus::Corpus;

const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of the chain for `topics` topics: `base ^ (topics * 0x9E3779B97F4A7C15)` (wrapping).
pub fn derive_seed(base: u64, topics: usize) -> u64 {
    base ^ (topics as u64).wrapping_mul(SEED_MIX)
}

/// Settings shared by every chain of a topic-count sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// Fixed alpha for every K, or `None` for `50 / K`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub base_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            alpha: None,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
            base_seed: DEFAULT_SEED,
        }
    }
}

impl SweepConfig {
    /// The fully resolved chain configuration for `topics`.
    pub fn config_for(&self, topics: usize) -> LdaConfig {
        LdaConfig {
            topics,
            alpha: self.alpha.unwrap_or_else(|| default_alpha(topics)),
            beta: self.beta,
            iterations: self.iterations,
            burn_in: self.burn_in,
            seed: derive_seed(self.base_seed, topics),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub topics: usize,
    pub log_likelihood: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// In grid order.
    pub entries: Vec<SweepEntry>,
    /// Topic count with the highest final log-likelihood; ties go to the smaller count.
    pub selected: usize,
}

/// Trains one chain per grid value on up to `jobs` threads and picks the best K.
/// Results do not depend on `jobs`: each chain owns its seed and the corpus is shared read-only.
pub fn sweep_topics(corpus: &Corpus, grid: &[usize], template: &SweepConfig, jobs: usize) -> Result<SweepResult, LdaError> {
    if grid.is_empty() {
        return Err(LdaError::EmptyGrid);
    }
    let configs: Vec<LdaConfig> = grid.iter().map(|&k| template.config_for(k)).collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| LdaError::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let models: Vec<TrainedModel> =
        pool.install(|| configs.par_iter().map(|cfg| train(corpus, cfg)).collect::<Result<_, _>>())?;

    let entries: Vec<SweepEntry> =
        models.iter().map(|m| SweepEntry { topics: m.config.topics, log_likelihood: m.final_ll, seed: m.config.seed }).collect();
    let best = entries
        .iter()
        .reduce(|best, e| {
            if e.log_likelihood > best.log_likelihood || (e.log_likelihood == best.log_likelihood && e.topics < best.topics) {
                e
            } else {
                best
            }
        })
        .expect("grid is nonempty");
    Ok(SweepResult { selected: best.topics, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus() -> Corpus {
        Corpus::from_tokens(vec![
            vec!["rental", "claim", "rental", "deductible", "claim"],
            vec!["police", "report", "fault", "police", "report"],
            vec!["rental", "deductible", "claim"],
            vec!["fault", "police", "report"],
        ])
        .unwrap()
    }

    fn quick() -> SweepConfig {
        SweepConfig { iterations: 40, burn_in: 5, ..SweepConfig::default() }
    }

    #[test]
    fn seed_derivation() {
        assert_eq!(derive_seed(42, 0), 42);
        assert_eq!(derive_seed(42, 1), 42 ^ 0x9E37_79B9_7F4A_7C15);
        assert_eq!(derive_seed(0, 2), 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(2));
        assert_eq!(quick().config_for(5).alpha, 10.0);
        assert_eq!(SweepConfig { alpha: Some(0.1), ..quick() }.config_for(5).alpha, 0.1);
    }

    #[test]
    fn singleton_grid() {
        let r = sweep_topics(&corpus(), &[1], &quick(), 1).unwrap();
        assert_eq!(r.selected, 1);
        assert_eq!(r.entries.len(), 1);
        assert!(matches!(sweep_topics(&corpus(), &[], &quick(), 1), Err(LdaError::EmptyGrid)));
        assert!(sweep_topics(&corpus(), &[0], &quick(), 1).is_err());
    }

    #[test]
    fn selection_is_argmax_and_job_independent() {
        let grid = [1, 2, 3, 4];
        let a = sweep_topics(&corpus(), &grid, &quick(), 1).unwrap();
        let b = sweep_topics(&corpus(), &grid, &quick(), 4).unwrap();
        assert_eq!(a, b);
        let max = a.entries.iter().map(|e| e.log_likelihood).fold(f64::NEG_INFINITY, f64::max);
        let first = a.entries.iter().filter(|e| e.log_likelihood == max).map(|e| e.topics).min().unwrap();
        assert_eq!(a.selected, first);
    }

    #[test]
    fn ties_pick_smallest_k() {
        // A single-word vocabulary gives log-likelihood 0 for every K.
        let c = Corpus::from_tokens(vec![vec!["claim", "claim"]]).unwrap();
        let r = sweep_topics(&c, &[4, 2, 3], &quick(), 2).unwrap();
        assert!(r.entries.iter().all(|e| e.log_likelihood == r.entries[0].log_likelihood));
        assert_eq!(r.selected, 2);
    }
}
