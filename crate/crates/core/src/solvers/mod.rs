//! Reference solvers and the batch success-rate protocol.

mod anneal;
mod brute;
mod stats;

pub use anneal::{simulated_annealing, AnnealSchedule, Annealer};
pub use brute::{brute_force, ExhaustiveResult, DEFAULT_ARGMIN_CAP, MAX_EXHAUSTIVE_SPINS};
pub use stats::{batch_stats, cut_threshold, BatchConfig, Goal, HistogramBin, SuccessStats};

use crate::error::Result;
use crate::ising::{IsingModel, SpinConfig};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Solution {
    pub spins: SpinConfig,
    pub energy: f64,
}

/// Anything that maps a model and a seed to a configuration.
pub trait Solver {
    fn name(&self) -> &str;
    fn solve(&self, model: &IsingModel, seed: u64) -> Result<Solution>;
}

/// Exhaustive search as a [`Solver`]; the seed is ignored.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exhaustive;

impl Solver for Exhaustive {
    fn name(&self) -> &str {
        "exact"
    }

    fn solve(&self, model: &IsingModel, _seed: u64) -> Result<Solution> {
        let r = brute_force(model, 1)?;
        Ok(Solution { spins: r.optima.into_iter().next().expect("at least one optimum"), energy: r.min_energy })
    }
}
