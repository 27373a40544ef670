use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::graph::energy_to_cut;
use crate::ising::IsingModel;
use crate::rng::run_seed;
use crate::solvers::Solver;

/// What counts as a successful run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Goal {
    /// Success when the energy reaches `target` (within rounding slack).
    Energy { target: f64 },
    /// Max-Cut success when the cut `(W − H)/2` is at least `threshold`.
    Cut { total_weight: f64, threshold: f64 },
}

impl Goal {
    fn slack(x: f64) -> f64 {
        1e-9 * libm::fabs(x).max(1.0)
    }

    /// Objective reported in the histogram: the energy, or the cut for Max-Cut goals.
    pub fn objective(&self, energy: f64) -> f64 {
        match *self {
            Goal::Energy { .. } => energy,
            Goal::Cut { total_weight, .. } => energy_to_cut(total_weight, energy),
        }
    }

    pub fn is_success(&self, energy: f64) -> bool {
        match *self {
            Goal::Energy { target } => energy <= target + Self::slack(target),
            Goal::Cut { threshold, .. } => self.objective(energy) >= threshold - Self::slack(threshold),
        }
    }

    pub fn target(&self) -> f64 {
        match *self {
            Goal::Energy { target } => target,
            Goal::Cut { threshold, .. } => threshold,
        }
    }
}

/// Smallest cut value on the instance's weight lattice that is at least
/// `fraction × optimum`. With `granularity = Some(1.0)` (unit weights) the 98%
/// threshold for an optimum of 475 is `ceil(465.5) = 466`.
pub fn cut_threshold(optimum: f64, fraction: f64, granularity: Option<f64>) -> f64 {
    let raw = fraction * optimum;
    match granularity {
        Some(g) if g > 0.0 => libm::ceil(raw / g - 1e-9) * g,
        _ => raw,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HistogramBin {
    pub value: f64,
    pub count: usize,
}

/// Batch statistics of repeated seeded runs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuccessStats {
    pub problem_id: String,
    pub solver: String,
    pub target: f64,
    pub runs_per_batch: usize,
    pub batches: usize,
    pub mean: f64,
    pub std: f64,
    /// Success rate of each batch, in batch order.
    pub batch_rates: Vec<f64>,
    pub histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchConfig {
    pub runs_per_batch: usize,
    pub batches: usize,
    pub base_seed: u64,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig { runs_per_batch: 100, batches: 1, base_seed: 0 }
    }
}

/// Runs `batches × runs_per_batch` independent solves, run `(b, r)` seeded with
/// [`run_seed`]`(base_seed, b, r)`, and summarizes the success rate across batches.
pub fn batch_stats<S: Solver + ?Sized>(
    solver: &S,
    model: &IsingModel,
    goal: Goal,
    problem_id: &str,
    config: BatchConfig,
) -> Result<SuccessStats> {
    if config.runs_per_batch == 0 || config.batches == 0 {
        return Err(invalid("batch statistics need at least one run and one batch"));
    }
    let mut objectives = Vec::with_capacity(config.runs_per_batch * config.batches);
    let mut batch_rates = Vec::with_capacity(config.batches);
    for batch in 0..config.batches {
        let mut hits = 0usize;
        for run in 0..config.runs_per_batch {
            let solution = solver.solve(model, run_seed(config.base_seed, batch, run))?;
            if goal.is_success(solution.energy) {
                hits += 1;
            }
            objectives.push(goal.objective(solution.energy));
        }
        batch_rates.push(hits as f64 / config.runs_per_batch as f64);
    }

    let (mean, std) = mean_and_std(&batch_rates);
    Ok(SuccessStats {
        problem_id: problem_id.to_string(),
        solver: solver.name().to_string(),
        target: goal.target(),
        runs_per_batch: config.runs_per_batch,
        batches: config.batches,
        mean,
        std,
        batch_rates,
        histogram: histogram(objectives),
    })
}

/// Mean and sample standard deviation (zero for a single batch).
fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

fn histogram(mut values: Vec<f64>) -> Vec<HistogramBin> {
    values.sort_by(f64::total_cmp);
    let mut bins: Vec<HistogramBin> = Vec::new();
    for v in values {
        match bins.last_mut() {
            Some(bin) if libm::fabs(bin.value - v) <= 1e-9 * libm::fabs(v).max(1.0) => bin.count += 1,
            _ => bins.push(HistogramBin { value: v, count: 1 }),
        }
    }
    bins
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ising::SpinConfig;
    use crate::solvers::Solution;

    struct Fixed(f64);

    impl Solver for Fixed {
        fn name(&self) -> &str {
            "fixed"
        }
        fn solve(&self, model: &IsingModel, _seed: u64) -> Result<Solution> {
            Ok(Solution { spins: SpinConfig::uniform(model.n(), true), energy: self.0 })
        }
    }

    /// Succeeds on runs whose seed is even.
    struct Coin;

    impl Solver for Coin {
        fn name(&self) -> &str {
            "coin"
        }
        fn solve(&self, model: &IsingModel, seed: u64) -> Result<Solution> {
            let energy = if seed % 2 == 0 { -1.0 } else { 0.0 };
            Ok(Solution { spins: SpinConfig::uniform(model.n(), true), energy })
        }
    }

    #[test]
    fn always_optimal_solver() {
        let m = IsingModel::new(2);
        let cfg = BatchConfig { runs_per_batch: 10, batches: 3, base_seed: 1 };
        let s = batch_stats(&Fixed(-1.0), &m, Goal::Energy { target: -1.0 }, "p", cfg).unwrap();
        assert_eq!((s.mean, s.std), (1.0, 0.0));
        assert_eq!(s.histogram, alloc::vec![HistogramBin { value: -1.0, count: 30 }]);
    }

    #[test]
    fn never_successful_solver() {
        let m = IsingModel::new(2);
        let s = batch_stats(&Fixed(0.0), &m, Goal::Energy { target: -1.0 }, "p", BatchConfig::default()).unwrap();
        assert_eq!(s.mean, 0.0);
    }

    #[test]
    fn stats_are_reproducible_and_consistent() {
        let m = IsingModel::new(1);
        let cfg = BatchConfig { runs_per_batch: 50, batches: 4, base_seed: 9 };
        let a = batch_stats(&Coin, &m, Goal::Energy { target: -1.0 }, "p", cfg).unwrap();
        let b = batch_stats(&Coin, &m, Goal::Energy { target: -1.0 }, "p", cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.mean > 0.2 && a.mean < 0.8);
        assert!(a.std > 0.0);
        let mass: usize = a.histogram.iter().map(|b| b.count).sum();
        assert_eq!(mass, 200);
        let direct = a.batch_rates.iter().sum::<f64>() / 4.0;
        assert!((direct - a.mean).abs() < 1e-15);
    }

    #[test]
    fn cut_threshold_rounds_up_on_integer_weights() {
        assert_eq!(cut_threshold(475.0, 0.98, Some(1.0)), 466.0);
        assert_eq!(cut_threshold(475.0, 0.99, Some(1.0)), 471.0);
        assert_eq!(cut_threshold(100.0, 0.95, Some(1.0)), 95.0);
        assert_eq!(cut_threshold(10.0, 0.5, None), 5.0);
    }

    #[test]
    fn cut_goal_uses_cut_units() {
        // W = 10: energy −6 is cut 8.
        let goal = Goal::Cut { total_weight: 10.0, threshold: 8.0 };
        assert!(goal.is_success(-6.0));
        assert!(!goal.is_success(-4.0));
        assert_eq!(goal.objective(-6.0), 8.0);
    }

    #[test]
    fn empty_batches_rejected() {
        let m = IsingModel::new(1);
        let cfg = BatchConfig { runs_per_batch: 0, batches: 1, base_seed: 0 };
        assert!(matches!(
            batch_stats(&Coin, &m, Goal::Energy { target: 0.0 }, "p", cfg),
            Err(Error::InvalidInput(_))
        ));
    }
}
