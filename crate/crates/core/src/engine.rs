//! Discrete-time measurement-feedback CIM simulator.
//!
//! Each round every pulse amplitude follows
//!
//! ```text
//! x_i ← x_i + dt·[(p(t) − 1)·x_i − sat·x_i³ + f_i] + noise·√dt·ξ_i
//! ```
//!
//! with the pump `p(t)` ramped linearly through the oscillation threshold `p = 1`
//! and the injected field `f_i = r·Σ_j J̃_ij σ_j` computed from the measured signs.
//! `J̃` is `J` divided by `max_i Σ_j |J_ij|`, which bounds the injection by `r`
//! whatever the graph density.
//!
//! The injection sign is chosen so that it lowers `H = −Σ J_ij σ_i σ_j`: a
//! positive coupling pulls both pulses toward the same phase.

use alloc::format;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::ising::{absorb_field, ising_energy, restore_from_ancilla, Adjacency, IsingModel, SpinConfig};
use crate::rng::{rng_from_seed, SimRng};
use crate::solvers::{batch_stats, BatchConfig, Goal, Solution, Solver, SuccessStats};

/// Linear pump ramp over `rounds` rounds, normalized so the threshold sits at 1.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PumpSchedule {
    pub p_start: f64,
    pub p_end: f64,
    pub rounds: usize,
}

impl PumpSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(invalid("pump schedule needs at least one round"));
        }
        if !(self.p_start < 1.0 && self.p_end > self.p_start) {
            return Err(invalid(format!(
                "pump must start below threshold and rise: p_start = {}, p_end = {}",
                self.p_start, self.p_end
            )));
        }
        Ok(())
    }

    /// Pump value applied in round `round` (0-based).
    pub fn pump(&self, round: usize) -> f64 {
        if self.rounds <= 1 {
            return self.p_start;
        }
        let frac = round as f64 / (self.rounds - 1) as f64;
        self.p_start + (self.p_end - self.p_start) * frac
    }
}

/// What the injection is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FeedbackMode {
    /// Signs of the measured amplitudes.
    #[default]
    Binary,
    /// The measured amplitudes themselves.
    Analog,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CimParams {
    pub schedule: PumpSchedule,
    pub r: f64,
    pub noise_amp: f64,
    pub dt: f64,
    pub seed: u64,
    pub sat: f64,
    /// Standard deviation of the initial amplitudes; `None` uses `noise_amp`.
    pub x0_std: Option<f64>,
    pub feedback: FeedbackMode,
}

impl Default for CimParams {
    fn default() -> Self {
        CimParams {
            schedule: PumpSchedule { p_start: 0.5, p_end: 1.5, rounds: 4000 },
            r: 0.1,
            noise_amp: 0.1,
            dt: 0.05,
            seed: 0,
            sat: 1.0,
            x0_std: None,
            feedback: FeedbackMode::Binary,
        }
    }
}

impl CimParams {
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(invalid(format!("feedback gain r must be positive, got {}", self.r)));
        }
        if !(self.noise_amp >= 0.0 && self.noise_amp.is_finite()) {
            return Err(invalid(format!("noise amplitude must be >= 0, got {}", self.noise_amp)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.sat >= 0.0 && self.sat.is_finite()) {
            return Err(invalid(format!("saturation must be >= 0, got {}", self.sat)));
        }
        if let Some(s) = self.x0_std {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(invalid(format!("x0_std must be >= 0, got {s}")));
            }
        }
        Ok(())
    }

    pub fn x0_std(&self) -> f64 {
        self.x0_std.unwrap_or(self.noise_amp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `amplitudes[t]` is the state after round `t + 1`.
    pub amplitudes: Vec<Vec<f64>>,
    /// Energy of the signed readout of `amplitudes[t]` under the unscaled model.
    pub energy: Vec<f64>,
    pub final_spins: SpinConfig,
    /// First round (1-based) whose readout reaches the requested target energy.
    pub rounds_to_target: Option<usize>,
}

impl Trajectory {
    pub fn final_energy(&self) -> f64 {
        *self.energy.last().expect("at least one round")
    }
}

/// `f_i = r·Σ_j J_ij σ_j` on the model as given (no rescaling).
pub fn feedback_field(model: &IsingModel, spins: &SpinConfig, r: f64) -> Result<Vec<f64>> {
    if spins.len() != model.n() {
        return Err(Error::Dimension { expected: model.n(), actual: spins.len() });
    }
    let adj = model.adjacency();
    Ok((0..model.n()).map(|i| r * adj.weighted_sum(i, spins.as_slice())).collect())
}

/// Sign readout with ties at exactly zero resolved to +1.
pub fn readout(x: &[f64]) -> Result<SpinConfig> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    SpinConfig::new(x.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect())
}

/// A model prepared for simulation: couplings rescaled, parameters validated.
#[derive(Debug, Clone)]
pub struct CimEngine<'a> {
    model: &'a IsingModel,
    scaled: Adjacency,
    params: CimParams,
}

impl<'a> CimEngine<'a> {
    pub fn new(model: &'a IsingModel, params: CimParams) -> Result<Self> {
        params.validate()?;
        if !model.is_field_free() {
            return Err(invalid("CIM dynamics need a field-free model; apply absorb_field first"));
        }
        let norm = model.max_abs_row_sum();
        let factor = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        Ok(CimEngine { model, scaled: model.scaled(factor).adjacency(), params })
    }

    pub fn params(&self) -> &CimParams {
        &self.params
    }

    /// Advances `x` by one round in place. `round` is 0-based.
    pub fn step(&self, x: &mut [f64], round: usize, rng: &mut SimRng) -> Result<()> {
        let n = self.model.n();
        if x.len() != n {
            return Err(Error::Dimension { expected: n, actual: x.len() });
        }
        let p = &self.params;
        let gain = p.schedule.pump(round) - 1.0;
        let measured: Vec<f64> = match p.feedback {
            FeedbackMode::Binary => x.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect(),
            FeedbackMode::Analog => x.to_vec(),
        };
        let kick = p.noise_amp * libm::sqrt(p.dt);
        for (i, xi) in x.iter_mut().enumerate() {
            let injection = p.r * self.scaled.weighted_sum(i, &measured);
            let drift = gain * *xi - p.sat * *xi * *xi * *xi + injection;
            let xi_noise: f64 = StandardNormal.sample(rng);
            *xi += p.dt * drift + kick * xi_noise;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { round: round + 1 });
        }
        Ok(())
    }

    fn initial_state(&self, rng: &mut SimRng) -> Vec<f64> {
        let std = self.params.x0_std();
        (0..self.model.n())
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                std * z
            })
            .collect()
    }

    /// Full run with per-round amplitudes and energies.
    pub fn simulate(&self, target_energy: Option<f64>) -> Result<Trajectory> {
        let mut rng = rng_from_seed(self.params.seed);
        let x0 = self.initial_state(&mut rng);
        self.simulate_from(x0, &mut rng, target_energy)
    }

    /// Like [`CimEngine::simulate`] but starting from the given amplitudes and RNG.
    pub fn simulate_from(
        &self,
        mut x: Vec<f64>,
        rng: &mut SimRng,
        target_energy: Option<f64>,
    ) -> Result<Trajectory> {
        let rounds = self.params.schedule.rounds;
        let mut amplitudes = Vec::with_capacity(rounds);
        let mut energy = Vec::with_capacity(rounds);
        let mut rounds_to_target = None;
        for t in 0..rounds {
            self.step(&mut x, t, rng)?;
            let e = ising_energy(self.model, &readout(&x)?)?;
            if rounds_to_target.is_none() {
                if let Some(target) = target_energy {
                    if e <= target + 1e-9 * libm::fabs(target).max(1.0) {
                        rounds_to_target = Some(t + 1);
                    }
                }
            }
            energy.push(e);
            amplitudes.push(x.clone());
        }
        let final_spins = readout(&x)?;
        Ok(Trajectory { amplitudes, energy, final_spins, rounds_to_target })
    }

    /// Final readout only, without recording the trajectory.
    pub fn run(&self, seed: u64) -> Result<Solution> {
        let mut rng = rng_from_seed(seed);
        let mut x = self.initial_state(&mut rng);
        for t in 0..self.params.schedule.rounds {
            self.step(&mut x, t, &mut rng)?;
        }
        let spins = readout(&x)?;
        let energy = ising_energy(self.model, &spins)?;
        Ok(Solution { spins, energy })
    }
}

/// Simulates one run of `params.seed` on a field-free model.
pub fn simulate(model: &IsingModel, params: &CimParams, target_energy: Option<f64>) -> Result<Trajectory> {
    CimEngine::new(model, *params)?.simulate(target_energy)
}

/// [`Solver`] handle for the CIM. Models carrying a linear field are run through
/// [`absorb_field`] and mapped back with the ancilla fixed to +1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CimSolver {
    pub params: CimParams,
}

impl Solver for CimSolver {
    fn name(&self) -> &str {
        "cim"
    }

    fn solve(&self, model: &IsingModel, seed: u64) -> Result<Solution> {
        if model.is_field_free() {
            return CimEngine::new(model, self.params)?.run(seed);
        }
        let extended = absorb_field(model);
        let raw = CimEngine::new(&extended, self.params)?.run(seed)?;
        let spins = restore_from_ancilla(&raw.spins);
        let energy = ising_energy(model, &spins)?;
        Ok(Solution { spins, energy })
    }
}

/// Batch success statistics with the CIM as solver.
pub fn run_batch(
    model: &IsingModel,
    params: &CimParams,
    goal: Goal,
    problem_id: &str,
    config: BatchConfig,
) -> Result<SuccessStats> {
    params.validate()?;
    batch_stats(&CimSolver { params: *params }, model, goal, problem_id, config)
}

/// Best (lowest-energy) final readout over `runs` seeds derived from `base_seed`.
pub fn best_of(model: &IsingModel, params: &CimParams, runs: usize, base_seed: u64) -> Result<Solution> {
    let solver = CimSolver { params: *params };
    let mut best: Option<Solution> = None;
    for run in 0..runs {
        let s = solver.solve(model, crate::rng::run_seed(base_seed, 0, run))?;
        if best.as_ref().map_or(true, |b| s.energy < b.energy) {
            best = Some(s);
        }
    }
    best.ok_or_else(|| invalid("best_of needs at least one run"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pair(j: f64) -> IsingModel {
        IsingModel::from_couplings(2, [(0, 1, j)]).unwrap()
    }

    #[test]
    fn feedback_examples() {
        let up = SpinConfig::uniform(2, true);
        assert_eq!(feedback_field(&IsingModel::new(2), &up, 0.7).unwrap(), vec![0.0, 0.0]);
        assert_eq!(feedback_field(&pair(1.0), &up, 0.5).unwrap(), vec![0.5, 0.5]);
        assert_eq!(feedback_field(&pair(-1.0), &up, 0.5).unwrap(), vec![-0.5, -0.5]);
        assert!(feedback_field(&pair(1.0), &SpinConfig::uniform(3, true), 0.5).is_err());
    }

    #[test]
    fn readout_examples() {
        let s = readout(&[0.3, -0.1]).unwrap();
        assert_eq!(s.as_slice(), &[1, -1]);
        assert_eq!(readout(&[0.0, 0.0]).unwrap(), SpinConfig::uniform(2, true));
        assert_eq!(readout(&[f64::NAN]), Err(Error::NonFinite));
    }

    #[test]
    fn params_validation() {
        let mut p = CimParams::default();
        assert!(p.validate().is_ok());
        p.schedule.p_start = 1.2;
        assert!(p.validate().is_err());
        let p = CimParams { r: 0.0, ..CimParams::default() };
        assert!(p.validate().is_err());
        let p = CimParams { dt: -1.0, ..CimParams::default() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn pump_ramp_is_linear() {
        let s = PumpSchedule { p_start: 0.5, p_end: 1.5, rounds: 11 };
        assert_eq!(s.pump(0), 0.5);
        assert_eq!(s.pump(10), 1.5);
        assert!((s.pump(5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn engine_rejects_fields() {
        let m = IsingModel::new(1).with_field(vec![1.0]).unwrap();
        assert!(CimEngine::new(&m, CimParams::default()).is_err());
        // The solver handle absorbs the field instead.
        let s = CimSolver::default().solve(&m, 3).unwrap();
        assert_eq!(s.energy, -1.0);
    }

    #[test]
    fn single_round_from_rest() {
        let params = CimParams {
            schedule: PumpSchedule { p_start: 0.5, p_end: 1.5, rounds: 1 },
            noise_amp: 0.0,
            ..CimParams::default()
        };
        let t = simulate(&IsingModel::new(3), &params, None).unwrap();
        assert_eq!(t.amplitudes, vec![vec![0.0; 3]]);
        assert_eq!(t.final_spins, SpinConfig::uniform(3, true));
        assert!(t.energy[0].is_finite());

        let analog = CimParams { feedback: FeedbackMode::Analog, ..params };
        let t = simulate(&pair(1.0), &analog, None).unwrap();
        assert_eq!(t.amplitudes, vec![vec![0.0; 2]]);
    }

    #[test]
    fn divergence_is_reported() {
        let params = CimParams {
            schedule: PumpSchedule { p_start: 0.5, p_end: 1.5, rounds: 50 },
            dt: 10.0,
            x0_std: Some(1.0),
            ..CimParams::default()
        };
        let err = simulate(&pair(1.0), &params, None).unwrap_err();
        assert!(matches!(err, Error::Divergence { round } if round >= 1));
    }
}
