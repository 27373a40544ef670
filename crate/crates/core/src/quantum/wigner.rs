use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{invalid, Result};

/// Symmetric phase-space grid `[-x_max, x_max] × [-p_max, p_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub x_max: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    /// Square grid reaching `2√n_max`, which contains every number state up to `n_max`.
    pub fn for_truncation(n_max: usize, points: usize) -> Self {
        let r = 2.0 * libm::sqrt(n_max.max(1) as f64);
        GridSpec { x_max: r, p_max: r, nx: points, np: points }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 3 || self.np < 3 {
            return Err(invalid("Wigner grid needs at least 3 points per axis"));
        }
        if !(self.x_max > 0.0 && self.p_max > 0.0 && self.x_max.is_finite() && self.p_max.is_finite()) {
            return Err(invalid("Wigner grid extents must be positive and finite"));
        }
        Ok(())
    }

    fn axis(extent: f64, points: usize) -> Vec<f64> {
        let step = 2.0 * extent / (points - 1) as f64;
        (0..points).map(|i| -extent + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// `values[(i, j)] = W(x_i, p_j)`.
    pub values: DMatrix<f64>,
    /// Set when the state has visible weight on the grid border, so the grid
    /// does not cover its support.
    pub support_warning: bool,
}

impl WignerGrid {
    pub fn dx(&self) -> f64 {
        self.x_axis[1] - self.x_axis[0]
    }

    pub fn dp(&self) -> f64 {
        self.p_axis[1] - self.p_axis[0]
    }

    /// Riemann sum `Σ W Δx Δp`.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.dx() * self.dp()
    }

    pub fn min_value(&self) -> f64 {
        self.values.min()
    }

    pub fn max_value(&self) -> f64 {
        self.values.max()
    }

    /// Column index of the `p` grid point closest to zero.
    pub fn p_zero_index(&self) -> usize {
        let mut best = 0;
        for (j, p) in self.p_axis.iter().enumerate() {
            if libm::fabs(*p) < libm::fabs(self.p_axis[best]) {
                best = j;
            }
        }
        best
    }
}

/// `W(x, p) = Tr[ρ D(α) Π D(α)†] / π` with `α = (x + ip)/√2`, so the vacuum peaks at `1/π`.
///
/// `buf` must hold `dim` entries and is used as scratch.
fn wigner_with(rho: &DMatrix<Complex64>, sq: &[f64], x: f64, p: f64, buf: &mut [Complex64]) -> f64 {
    let d = rho.nrows();
    let a = Complex64::new(x, p) * core::f64::consts::FRAC_1_SQRT_2;
    let two_a = a * 2.0;
    let two_ac = two_a.conj();
    buf[0] = Complex64::new(libm::exp(-2.0 * a.norm_sqr()) / core::f64::consts::PI, 0.0);
    let mut w = rho[(0, 0)].re * buf[0].re;
    for n in 1..d {
        buf[n] = two_a * buf[n - 1] / sq[n];
        w += 2.0 * (rho[(0, n)] * buf[n]).re;
    }
    for m in 1..d {
        let mut temp = buf[m];
        buf[m] = (two_ac * temp - buf[m - 1] * sq[m]) / sq[m];
        w += (rho[(m, m)] * buf[m]).re;
        for n in m + 1..d {
            let next = (two_a * buf[n - 1] - temp * sq[m]) / sq[n];
            temp = buf[n];
            buf[n] = next;
            w += 2.0 * (rho[(m, n)] * buf[n]).re;
        }
    }
    w
}

/// Wigner function at a single phase-space point.
pub fn wigner_point(rho: &DensityMatrix, x: f64, p: f64) -> f64 {
    let d = rho.dim();
    let sq: Vec<f64> = (0..d).map(|k| libm::sqrt(k as f64)).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); d];
    wigner_with(rho.matrix(), &sq, x, p, &mut buf)
}

/// Wigner function on a grid.
pub fn wigner(rho: &DensityMatrix, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let d = rho.dim();
    let sq: Vec<f64> = (0..d).map(|k| libm::sqrt(k as f64)).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); d];
    let x_axis = GridSpec::axis(spec.x_max, spec.nx);
    let p_axis = GridSpec::axis(spec.p_max, spec.np);
    let values = DMatrix::from_fn(spec.nx, spec.np, |i, j| wigner_with(rho.matrix(), &sq, x_axis[i], p_axis[j], &mut buf));

    let peak = values.amax();
    let mut edge: f64 = 0.0;
    for i in 0..spec.nx {
        edge = edge.max(libm::fabs(values[(i, 0)])).max(libm::fabs(values[(i, spec.np - 1)]));
    }
    for j in 0..spec.np {
        edge = edge.max(libm::fabs(values[(0, j)])).max(libm::fabs(values[(spec.nx - 1, j)]));
    }
    let mut grid = WignerGrid { x_axis, p_axis, values, support_warning: false };
    grid.support_warning = edge > 1e-4 * peak || libm::fabs(grid.integral() - 1.0) > 1e-3;
    Ok(grid)
}

/// Distance along `x` between the two highest local maxima of the `p ≈ 0` slice,
/// refined by parabolic interpolation; 0 when there is at most one maximum.
pub fn lobe_separation(w: &WignerGrid) -> f64 {
    let j = w.p_zero_index();
    let slice: Vec<f64> = (0..w.x_axis.len()).map(|i| w.values[(i, j)]).collect();
    let top = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(top > 0.0) {
        return 0.0;
    }
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..slice.len() - 1 {
        let (l, c, r) = (slice[i - 1], slice[i], slice[i + 1]);
        if c > l && c >= r && c >= 1e-3 * top {
            let curvature = l - 2.0 * c + r;
            let shift = if curvature < 0.0 { 0.5 * (l - r) / curvature } else { 0.0 };
            let height = c - 0.25 * (l - r) * shift;
            peaks.push((height, w.x_axis[i] + shift * w.dx()));
        }
    }
    if peaks.len() < 2 {
        return 0.0;
    }
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    libm::fabs(peaks[0].1 - peaks[1].1)
}
