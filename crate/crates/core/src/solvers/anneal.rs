use alloc::vec::Vec;
use alloc::format;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::ising::{ising_energy, IsingModel, SpinConfig};
use crate::rng::rng_from_seed;
use crate::solvers::{Solution, Solver};

/// Geometric cooling from `t_start` to `t_end` over `sweeps` Metropolis sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub seed: u64,
}

impl AnnealSchedule {
    pub const DEFAULT_SWEEPS: usize = 1000;

    /// Temperatures scaled to the model: start at the largest absolute local-field
    /// bound, end at 5% of the smallest nonzero coefficient.
    pub fn for_model(model: &IsingModel, sweeps: usize, seed: u64) -> Self {
        let n = model.n();
        let mut bound = alloc::vec![0.0; n];
        let mut smallest = f64::INFINITY;
        for (i, j, v) in model.couplings() {
            let a = libm::fabs(v);
            bound[i] += a;
            bound[j] += a;
            if a > 0.0 {
                smallest = smallest.min(a);
            }
        }
        if let Some(h) = model.field() {
            for (b, v) in bound.iter_mut().zip(h) {
                let a = libm::fabs(*v);
                *b += a;
                if a > 0.0 {
                    smallest = smallest.min(a);
                }
            }
        }
        let largest = bound.into_iter().fold(0.0, f64::max);
        if largest == 0.0 {
            return AnnealSchedule { sweeps, t_start: 1.0, t_end: 1.0, seed };
        }
        AnnealSchedule { sweeps, t_start: largest, t_end: 0.05 * smallest, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(invalid("annealing needs at least one sweep"));
        }
        if !(self.t_end > 0.0 && self.t_start >= self.t_end && self.t_start.is_finite()) {
            return Err(invalid(format!(
                "temperatures must satisfy t_start >= t_end > 0, got {} and {}",
                self.t_start, self.t_end
            )));
        }
        Ok(())
    }

    pub fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.t_start;
        }
        let frac = sweep as f64 / (self.sweeps - 1) as f64;
        self.t_start * libm::pow(self.t_end / self.t_start, frac)
    }
}

/// Single-spin-flip Metropolis annealing; returns the best configuration seen.
pub fn simulated_annealing(model: &IsingModel, schedule: &AnnealSchedule) -> Result<Solution> {
    schedule.validate()?;
    let n = model.n();
    let mut rng = rng_from_seed(schedule.seed);
    let adj = model.adjacency();
    let field = model.field();

    let mut spins: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let mut local: Vec<f64> = (0..n)
        .map(|i| adj.weighted_sum(i, &spins) + field.map_or(0.0, |h| h[i]))
        .collect();
    let to_config = |s: &[f64]| SpinConfig::new(s.iter().map(|&v| v as i8).collect()).expect("±1");
    let mut energy = ising_energy(model, &to_config(&spins))?;
    let mut best_energy = energy;
    let mut best = spins.clone();

    for sweep in 0..schedule.sweeps {
        let beta = 1.0 / schedule.temperature(sweep);
        for i in 0..n {
            let delta = 2.0 * spins[i] * local[i];
            let accept = delta <= 0.0 || rng.random::<f64>() < libm::exp(-delta * beta);
            if !accept {
                continue;
            }
            spins[i] = -spins[i];
            let s = spins[i];
            for &(j, v) in adj.neighbors(i) {
                local[j] += 2.0 * v * s;
            }
            energy += delta;
            if energy < best_energy - 1e-12 {
                best_energy = energy;
                best.copy_from_slice(&spins);
            }
        }
    }

    let spins = to_config(&best);
    let energy = ising_energy(model, &spins)?;
    Ok(Solution { spins, energy })
}

/// [`Solver`] handle running [`simulated_annealing`] with a per-run seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annealer {
    pub sweeps: usize,
    /// Explicit `(t_start, t_end)`; derived from the model when absent.
    pub temperatures: Option<(f64, f64)>,
}

impl Default for Annealer {
    fn default() -> Self {
        Annealer { sweeps: AnnealSchedule::DEFAULT_SWEEPS, temperatures: None }
    }
}

impl Annealer {
    pub fn schedule(&self, model: &IsingModel, seed: u64) -> AnnealSchedule {
        match self.temperatures {
            Some((t_start, t_end)) => AnnealSchedule { sweeps: self.sweeps, t_start, t_end, seed },
            None => AnnealSchedule::for_model(model, self.sweeps, seed),
        }
    }
}

impl Solver for Annealer {
    fn name(&self) -> &str {
        "sa"
    }

    fn solve(&self, model: &IsingModel, seed: u64) -> Result<Solution> {
        simulated_annealing(model, &self.schedule(model, seed))
    }
}
