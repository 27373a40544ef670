//! Single degenerate optical parametric oscillator (DOPO) in a truncated number basis.
//!
//! The signal mode obeys
//!
//! ```text
//! dρ/dt = (S/2)[a†² − a², ρ] + γ_s(2aρa† − a†aρ − ρa†a) + (B/2)(2a²ρa†² − a†²a²ρ − ρa†²a²)
//! ```
//!
//! where `S = κF/γ_p` folds the pump amplitude `F`, the signal–pump coupling `κ`
//! and the pump damping `γ_p` of the underlying signal–pump model into a single
//! parametric gain; the pump mode and its reservoir are eliminated. Above the
//! threshold `S = γ_s` the steady state splits into two phase lobes at
//! `α ≈ ±√((S − γ_s)/B)`.

mod banded;
mod master;
mod wigner;

pub use master::{
    evolve, master_rhs, rate_bound, steady_state, steady_state_by_evolution, Evolution, LEAKAGE_LIMIT,
    STEADY_STATE_TOL,
};
pub use wigner::{lobe_separation, wigner, wigner_point, GridSpec, WignerGrid};

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Rates of the master equation, in units where `gamma_s` is typically 1.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DopoParams {
    /// Parametric gain `S = κF/γ_p`.
    pub s: f64,
    /// Linear signal loss rate.
    pub gamma_s: f64,
    /// Two-photon loss rate.
    pub b: f64,
}

impl DopoParams {
    /// Two-photon loss used for phase-space pictures: small enough that `S = 2`
    /// stays well inside `n_max = 60`.
    pub const DEFAULT_B: f64 = 0.2;
    pub const DEFAULT_N_MAX: usize = 60;

    pub fn new(s: f64) -> Self {
        DopoParams { s, gamma_s: 1.0, b: Self::DEFAULT_B }
    }

    /// `B = 0` is accepted so pure linear loss can be integrated; steady states need `B > 0`
    /// above threshold.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_s > 0.0 && self.gamma_s.is_finite()) {
            return Err(invalid(format!("gamma_s must be positive, got {}", self.gamma_s)));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(invalid(format!("two-photon loss must be >= 0, got {}", self.b)));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(invalid(format!("S must be >= 0, got {}", self.s)));
        }
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        self.gamma_s
    }
}

/// Density matrix on `|0⟩ … |n_max⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::Dimension { expected: rho.nrows(), actual: rho.ncols() });
        }
        if rho.nrows() == 0 {
            return Err(invalid("density matrix needs at least one level"));
        }
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DensityMatrix { rho })
    }

    /// Number state `|k⟩⟨k|`.
    pub fn fock(n_max: usize, k: usize) -> Result<Self> {
        if k > n_max {
            return Err(invalid(format!("level {k} outside truncation n_max = {n_max}")));
        }
        let mut rho = DMatrix::zeros(n_max + 1, n_max + 1);
        rho[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { rho })
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(n_max, 0).expect("level 0 always fits")
    }

    /// Coherent state `|α⟩`, truncated and renormalized.
    pub fn coherent(n_max: usize, alpha: Complex64) -> Self {
        let amps = coherent_amplitudes(n_max, alpha);
        let rho = DMatrix::from_fn(n_max + 1, n_max + 1, |m, n| amps[m] * amps[n].conj());
        let mut state = DensityMatrix { rho };
        state.normalize();
        state
    }

    /// Convex combination of states sharing one truncation.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let dim = parts.first().ok_or_else(|| invalid("empty mixture"))?.1.dim();
        let mut rho = DMatrix::zeros(dim, dim);
        for (w, part) in parts {
            if part.dim() != dim {
                return Err(Error::Dimension { expected: dim, actual: part.dim() });
            }
            rho += part.rho.map(|z| z * *w);
        }
        let mut state = DensityMatrix { rho };
        state.normalize();
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn population(&self, k: usize) -> f64 {
        self.rho[(k, k)].re
    }

    /// Largest `|ρ_mn − conj(ρ_nm)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for n in m..d {
                worst = worst.max((self.rho[(m, n)] - self.rho[(n, m)].conj()).norm_sqr());
            }
        }
        libm::sqrt(worst)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()).map(|z| z * 0.5);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks the Hermiticity, unit trace and positivity invariants.
    pub fn check(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(invalid(format!("density matrix not Hermitian (error {herm:e})")));
        }
        let tr = self.trace();
        if libm::fabs(tr.re - 1.0) > 1e-8 || libm::fabs(tr.im) > 1e-8 {
            return Err(invalid(format!("trace {} + {}i differs from 1", tr.re, tr.im)));
        }
        let min = self.min_eigenvalue();
        if min < -1e-8 {
            return Err(invalid(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Replaces ρ by (ρ + ρ†)/2 with unit trace; returns the trace before rescaling.
    pub(crate) fn normalize(&mut self) -> f64 {
        let d = self.dim();
        for m in 0..d {
            for n in m + 1..d {
                let avg = (self.rho[(m, n)] + self.rho[(n, m)].conj()) * 0.5;
                self.rho[(m, n)] = avg;
                self.rho[(n, m)] = avg.conj();
            }
            self.rho[(m, m)].im = 0.0;
        }
        let tr = self.rho.trace().re;
        if tr != 0.0 {
            self.rho /= Complex64::new(tr, 0.0);
        }
        tr
    }
}

/// `Tr[ρ a†a]`.
pub fn photon_number(rho: &DensityMatrix) -> f64 {
    (0..rho.dim()).map(|n| n as f64 * rho.population(n)).sum()
}

/// `Tr[ρ a]`.
pub fn mean_amplitude(rho: &DensityMatrix) -> Complex64 {
    let m = rho.matrix();
    (1..rho.dim()).map(|n| m[(n, n - 1)] * libm::sqrt(n as f64)).sum()
}

fn coherent_amplitudes(n_max: usize, alpha: Complex64) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new(libm::exp(-0.5 * alpha.norm_sqr()), 0.0);
    amps.push(c);
    for n in 1..=n_max {
        c = c * alpha / libm::sqrt(n as f64);
        amps.push(c);
    }
    amps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn photon_number_examples() {
        assert_eq!(photon_number(&DensityMatrix::vacuum(5)), 0.0);
        assert_eq!(photon_number(&DensityMatrix::fock(5, 2).unwrap()), 2.0);
    }

    #[test]
    fn coherent_state_moments() {
        let alpha = Complex64::new(1.2, -0.4);
        let rho = DensityMatrix::coherent(40, alpha);
        rho.check().unwrap();
        assert!((photon_number(&rho) - alpha.norm_sqr()).abs() < 1e-12);
        assert!((mean_amplitude(&rho) - alpha).norm() < 1e-12);
    }

    #[test]
    fn invariant_checks_catch_bad_states() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        let bad = DensityMatrix::from_matrix(m).unwrap();
        assert!(bad.check().is_err());
        assert!(DensityMatrix::fock(3, 4).is_err());
        assert!(DensityMatrix::from_matrix(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(DopoParams::new(2.0).validate().is_ok());
        assert!(DopoParams { s: 1.0, gamma_s: 0.0, b: 0.2 }.validate().is_err());
        assert!(DopoParams { s: -1.0, gamma_s: 1.0, b: 0.2 }.validate().is_err());
        assert!(DopoParams { s: 1.0, gamma_s: 1.0, b: -0.2 }.validate().is_err());
    }
}
