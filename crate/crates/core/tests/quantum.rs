use cim_core::quantum::{
    lobe_separation, mean_amplitude, photon_number, steady_state, wigner, DensityMatrix, DopoParams, GridSpec,
    STEADY_STATE_TOL,
};

const N_MAX: usize = DopoParams::DEFAULT_N_MAX;

fn grid() -> GridSpec {
    GridSpec { x_max: 8.0, p_max: 8.0, nx: 161, np: 161 }
}

fn state(s: f64, n_max: usize) -> DensityMatrix {
    steady_state(&DopoParams::new(s), n_max, STEADY_STATE_TOL).unwrap()
}

#[test]
fn lobes_separate_as_pump_grows() {
    let mut last = -1.0;
    for s in [1.0, 1.25, 1.5, 2.0] {
        let rho = state(s, N_MAX);
        rho.check().unwrap();
        let w = wigner(&rho, &grid()).unwrap();
        assert!((w.integral() - 1.0).abs() < 1e-3);
        assert!(w.min_value() >= -1.0 / std::f64::consts::PI - 1e-6);
        let sep = lobe_separation(&w);
        assert!(sep > last, "S = {s}: {sep} after {last}");
        last = sep;
    }
}

#[test]
fn above_threshold_state_is_bimodal_and_symmetric() {
    let rho = state(2.0, N_MAX);
    assert!(mean_amplitude(&rho).norm() <= 1e-8);
    let w = wigner(&rho, &grid()).unwrap();
    let (nx, np) = (w.x_axis.len(), w.p_axis.len());
    for i in 0..nx {
        for j in 0..np {
            assert!((w.values[(i, j)] - w.values[(nx - 1 - i, np - 1 - j)]).abs() < 1e-6);
        }
    }
    // Two lobes on either side of the origin, mirror images of each other.
    let j = w.p_zero_index();
    let slice: Vec<f64> = (0..nx).map(|i| w.values[(i, j)]).collect();
    let peak = (0..nx).max_by(|&a, &b| slice[a].total_cmp(&slice[b])).unwrap();
    assert!(w.x_axis[peak].abs() > 1.0);
    assert!((slice[peak] - slice[nx - 1 - peak]).abs() < 1e-6);
    assert!(slice[nx / 2] < slice[peak]);
}

#[test]
fn below_threshold_state_is_single_peaked() {
    let rho = state(0.5, N_MAX);
    let w = wigner(&rho, &grid()).unwrap();
    assert_eq!(lobe_separation(&w), 0.0);
    let j = w.p_zero_index();
    let nx = w.x_axis.len();
    let peak = (0..nx).max_by(|&a, &b| w.values[(a, j)].total_cmp(&w.values[(b, j)])).unwrap();
    assert_eq!(peak, nx / 2);
    let mean_x: f64 = (0..nx)
        .map(|i| (0..w.p_axis.len()).map(|k| w.values[(i, k)]).sum::<f64>() * w.x_axis[i])
        .sum::<f64>()
        * w.dx()
        * w.dp();
    assert!(mean_x.abs() < 1e-9);
}

#[test]
fn steady_state_is_a_valid_density_matrix() {
    for s in [0.0, 0.5, 1.0, 1.5, 2.0] {
        state(s, N_MAX).check().unwrap();
    }
}

#[test]
fn truncation_robustness() {
    for s in [1.0, 2.0] {
        let small = state(s, 60);
        let large = state(s, 120);
        let diff = photon_number(&small) - photon_number(&large);
        assert!(diff.abs() < 1e-4, "S = {s}: {diff}");
    }
}

#[test]
fn threshold_knee() {
    let p = DopoParams::new(0.0);
    let n = |s: f64| photon_number(&state(s, N_MAX));
    assert!(n(0.3) < 0.1);
    assert!(n(0.6) < 1.0);
    for s in [2.0, 2.5, 3.0] {
        let classical = (s - p.gamma_s) / p.b;
        let ratio = n(s) / classical;
        assert!((0.8..1.3).contains(&ratio), "S = {s}: ⟨n⟩/classical = {ratio}");
    }
    // Slope jumps across the threshold.
    let below = n(0.8) - n(0.6);
    let above = n(2.2) - n(2.0);
    assert!(above > 5.0 * below, "{below} vs {above}");
}
