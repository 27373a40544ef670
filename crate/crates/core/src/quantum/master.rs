use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::banded::BandedMatrix;
use super::{DensityMatrix, DopoParams};
use crate::error::{invalid, Error, Result};

/// Largest population of `|n_max⟩` tolerated before the truncation is reported as too small.
pub const LEAKAGE_LIMIT: f64 = 1e-4;

/// Default residual tolerance `‖Lρ‖_F` for [`steady_state`].
pub const STEADY_STATE_TOL: f64 = 1e-8;

/// Calls `f(m', n', c)` for every term `c·ρ_{m'n'}` contributing to `(Lρ)_{mn}`
/// in a basis of `d` levels.
#[inline]
fn for_each_term(p: &DopoParams, sq: &[f64], d: usize, m: usize, n: usize, mut f: impl FnMut(usize, usize, f64)) {
    let (mf, nf) = (m as f64, n as f64);
    let diag = -(p.gamma_s * (mf + nf) + 0.5 * p.b * (mf * (mf - 1.0) + nf * (nf - 1.0)));
    f(m, n, diag);
    if m + 1 < d && n + 1 < d {
        f(m + 1, n + 1, 2.0 * p.gamma_s * sq[m + 1] * sq[n + 1]);
    }
    if m + 2 < d && n + 2 < d {
        f(m + 2, n + 2, p.b * sq[m + 1] * sq[m + 2] * sq[n + 1] * sq[n + 2]);
    }
    let g = 0.5 * p.s;
    if g != 0.0 {
        if m >= 2 {
            f(m - 2, n, g * sq[m] * sq[m - 1]);
        }
        if m + 2 < d {
            f(m + 2, n, -g * sq[m + 1] * sq[m + 2]);
        }
        if n + 2 < d {
            f(m, n + 2, -g * sq[n + 1] * sq[n + 2]);
        }
        if n >= 2 {
            f(m, n - 2, g * sq[n] * sq[n - 1]);
        }
    }
}

fn sqrt_table(d: usize) -> Vec<f64> {
    (0..=d).map(|k| libm::sqrt(k as f64)).collect()
}

/// Right-hand side `dρ/dt` of the master equation with truncated ladder operators.
pub fn master_rhs(params: &DopoParams, rho: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::Dimension { expected: rho.nrows(), actual: rho.ncols() });
    }
    let d = rho.nrows();
    let sq = sqrt_table(d);
    Ok(DMatrix::from_fn(d, d, |m, n| {
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_term(params, &sq, d, m, n, |a, b, c| acc += rho[(a, b)] * c);
        acc
    }))
}

/// Bound on the generator's decay rates in a basis of `dim` levels; explicit steps
/// need `dt · rate_bound < 0.1`.
pub fn rate_bound(params: &DopoParams, dim: usize) -> f64 {
    let k = dim.saturating_sub(1) as f64;
    2.0 * params.gamma_s * k + params.b * k * (k - 1.0).max(0.0) + 2.0 * params.s * k
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub state: DensityMatrix,
    pub steps: usize,
    /// Largest `|Tr ρ − 1|` seen before the per-step renormalization.
    pub trace_drift: f64,
    /// Largest population of `|n_max⟩` seen along the way.
    pub max_leakage: f64,
}

/// Fixed-step RK4 from `rho0` to `t_final`.
///
/// After each step ρ is re-Hermitized and renormalized. The last step is
/// shortened so the run ends exactly at `t_final`.
pub fn evolve(rho0: &DensityMatrix, params: &DopoParams, t_final: f64, dt: f64) -> Result<Evolution> {
    params.validate()?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(invalid(alloc::format!("t_final must be finite and >= 0, got {t_final}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(alloc::format!("dt must be positive, got {dt}")));
    }
    let bound = rate_bound(params, rho0.dim());
    if dt * bound >= 0.1 {
        return Err(Error::StepTooLarge { dt, rate_bound: bound });
    }

    let last = rho0.n_max();
    let mut state = rho0.clone();
    let mut trace_drift: f64 = 0.0;
    let mut max_leakage = state.population(last);
    let steps = libm::ceil(t_final / dt - 1e-9).max(0.0) as usize;
    let mut t = 0.0;
    for step in 0..steps {
        let h = if step + 1 == steps { t_final - t } else { dt };
        let rho = state.matrix();
        let k1 = master_rhs(params, rho)?;
        let k2 = master_rhs(params, &(rho + &k1 * Complex64::new(0.5 * h, 0.0)))?;
        let k3 = master_rhs(params, &(rho + &k2 * Complex64::new(0.5 * h, 0.0)))?;
        let k4 = master_rhs(params, &(rho + &k3 * Complex64::new(h, 0.0)))?;
        let two = Complex64::new(2.0, 0.0);
        let next = rho + (k1 + k2 * two + k3 * two + k4) * Complex64::new(h / 6.0, 0.0);
        state = DensityMatrix::from_matrix(next).map_err(|_| Error::NonFinite)?;
        let tr = state.normalize();
        trace_drift = trace_drift.max(libm::fabs(tr - 1.0));
        max_leakage = max_leakage.max(state.population(last));
        if max_leakage > LEAKAGE_LIMIT {
            return Err(Error::Truncation { leakage: max_leakage, limit: LEAKAGE_LIMIT });
        }
        t += h;
    }
    Ok(Evolution { state, steps, trace_drift, max_leakage })
}

/// Stationary state of the master equation.
///
/// The generator only couples `ρ_mn` with `m − n` shifted by 0 or ±2, so the
/// sector reachable from the vacuum (even `m − n`) is solved directly as a banded
/// linear system with the trace condition replacing the `(0, 0)` equation. The
/// result is accepted when `‖Lρ‖_F < tol` and `|n_max⟩` holds less than
/// [`LEAKAGE_LIMIT`].
pub fn steady_state(params: &DopoParams, n_max: usize, tol: f64) -> Result<DensityMatrix> {
    params.validate()?;
    let d = n_max + 1;
    let sq = sqrt_table(d);

    // Index of (m, n) ordered by offset block m − n, then by min(m, n).
    let offsets: Vec<i64> = (-(n_max as i64)..=n_max as i64).filter(|k| k % 2 == 0).collect();
    let mut block_start = Vec::with_capacity(offsets.len());
    let mut size = 0usize;
    for &k in &offsets {
        block_start.push(size);
        size += d - k.unsigned_abs() as usize;
    }
    let index = |m: usize, n: usize| -> usize {
        let k = m as i64 - n as i64;
        let b = ((k - offsets[0]) / 2) as usize;
        debug_assert_eq!(offsets[b], k);
        block_start[b] + m.min(n)
    };

    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for &k in &offsets {
        for lo in 0..d - k.unsigned_abs() as usize {
            let (m, n) = if k >= 0 { (lo + k as usize, lo) } else { (lo, lo + (-k) as usize) };
            if m == 0 && n == 0 {
                continue;
            }
            let row = index(m, n);
            for_each_term(params, &sq, d, m, n, |a, b, c| triplets.push((row, index(a, b), c)));
        }
    }
    let trace_row = index(0, 0);
    for j in 0..d {
        triplets.push((trace_row, index(j, j), 1.0));
    }
    let lower = triplets.iter().map(|&(r, c, _)| r.saturating_sub(c)).max().unwrap_or(0);
    let upper = triplets.iter().map(|&(r, c, _)| c.saturating_sub(r)).max().unwrap_or(0);
    let mut a = BandedMatrix::new(size, lower, upper);
    for (r, c, v) in triplets {
        a.add(r, c, Complex64::new(v, 0.0));
    }
    let mut rhs = alloc::vec![Complex64::new(0.0, 0.0); size];
    rhs[trace_row] = Complex64::new(1.0, 0.0);
    let x = a.solve(rhs)?;

    let mut rho = DMatrix::zeros(d, d);
    for m in 0..d {
        for n in 0..d {
            if (m + n) % 2 == 0 {
                rho[(m, n)] = x[index(m, n)];
            }
        }
    }
    let mut state = DensityMatrix::from_matrix(rho)?;
    state.normalize();
    let residual = master_rhs(params, state.matrix())?.norm();
    if !(residual < tol) {
        return Err(Error::NoConvergence { residual });
    }
    let leakage = state.population(n_max);
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::Truncation { leakage, limit: LEAKAGE_LIMIT });
    }
    Ok(state)
}

/// Stationary state reached by integrating from the vacuum until `‖Lρ‖_F < tol`,
/// checking every unit of time up to `t_max`.
pub fn steady_state_by_evolution(params: &DopoParams, n_max: usize, tol: f64, dt: f64, t_max: f64) -> Result<DensityMatrix> {
    let mut state = DensityMatrix::vacuum(n_max);
    let mut t = 0.0;
    let mut residual = master_rhs(params, state.matrix())?.norm();
    while residual >= tol {
        if t >= t_max {
            return Err(Error::NoConvergence { residual });
        }
        state = evolve(&state, params, 1.0, dt)?.state;
        t += 1.0;
        residual = master_rhs(params, state.matrix())?.norm();
    }
    Ok(state)
}
