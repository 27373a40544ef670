mod common;

use cim_core::engine::{feedback_field, readout, simulate, CimEngine, CimParams, CimSolver, FeedbackMode, PumpSchedule};
use cim_core::generators::{mobius_ladder, mobius_max_cut, MobiusSpec};
use cim_core::graph::{cut_to_energy, maxcut_to_ising};
use cim_core::rng::{rng_from_seed, run_seed};
use cim_core::solvers::{brute_force, Solver};
use cim_core::{ising_energy, IsingModel, SpinConfig};
use common::*;
use proptest::prelude::*;

fn short(rounds: usize) -> CimParams {
    CimParams { schedule: PumpSchedule { p_start: 0.5, p_end: 1.5, rounds }, ..CimParams::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trajectory_is_deterministic(d in dense_model(10, false), seed in any::<u64>()) {
        let m = d.model();
        let p = CimParams { seed, ..short(60) };
        prop_assert_eq!(simulate(&m, &p, None).unwrap(), simulate(&m, &p, None).unwrap());
    }

    #[test]
    fn energy_trace_matches_readout(d in dense_model(10, false), seed in any::<u64>()) {
        let m = d.model();
        let t = simulate(&m, &CimParams { seed, ..short(40) }, None).unwrap();
        prop_assert_eq!(t.energy.len(), 40);
        for (x, e) in t.amplitudes.iter().zip(&t.energy) {
            let s = readout(x).unwrap();
            prop_assert_eq!(*e, d.energy(s.as_slice()));
        }
    }

    #[test]
    fn mirrored_noise_mirrors_trajectory(d in dense_model(10, false), seed in any::<u64>()) {
        let m = d.model();
        let (up, down) = mirrored_runs(&m, seed, 60);
        for (u, w) in up.iter().flatten().zip(down.iter().flatten()) {
            prop_assert_eq!(*u, -*w);
        }
    }

    #[test]
    fn feedback_is_linear(d in dense_model(10, false), bits in any::<u64>(), r in 0.01f64..5.0) {
        let m = d.model();
        let s = SpinConfig::new(spins_of(d.h.len(), bits)).unwrap();
        let f1 = feedback_field(&m, &s, 1.0).unwrap();
        let fr = feedback_field(&m, &s, r).unwrap();
        let fneg = feedback_field(&m, &s.negated(), 1.0).unwrap();
        for i in 0..f1.len() {
            prop_assert!((fr[i] - r * f1[i]).abs() < 1e-12 * (1.0 + f1[i].abs() * r));
            prop_assert_eq!(fneg[i], -f1[i]);
            let direct: f64 = (0..d.h.len()).filter(|&j| j != i).map(|j| {
                let c = if i < j { d.j[i][j] } else { d.j[j][i] };
                c * s.get(j) as f64
            }).sum();
            prop_assert!((f1[i] - direct).abs() < 1e-12);
        }
    }
}

/// Runs the dynamics from `x0` and `−x0` with the noise drawn explicitly and
/// applied with opposite signs; returns both amplitude histories.
fn mirrored_runs(m: &IsingModel, seed: u64, rounds: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    use rand_distr::{Distribution, StandardNormal};
    let p = CimParams { noise_amp: 0.0, ..short(rounds) };
    let engine = CimEngine::new(m, p).unwrap();
    let n = m.n();
    let mut rng = rng_from_seed(seed);
    let mut unused = rng_from_seed(0);
    let mut up: Vec<f64> = (0..n).map(|_| 0.1 * Distribution::<f64>::sample(&StandardNormal, &mut rng)).collect();
    let mut down: Vec<f64> = up.iter().map(|v| -v).collect();
    let kick = 0.1 * p.dt.sqrt();
    let (mut hu, mut hd) = (Vec::new(), Vec::new());
    for t in 0..rounds {
        engine.step(&mut up, t, &mut unused).unwrap();
        engine.step(&mut down, t, &mut unused).unwrap();
        for i in 0..n {
            let xi: f64 = StandardNormal.sample(&mut rng);
            up[i] += kick * xi;
            down[i] -= kick * xi;
        }
        hu.push(up.clone());
        hd.push(down.clone());
    }
    (hu, hd)
}

#[test]
fn mobius_trajectory_flips_with_the_noise() {
    let m = maxcut_to_ising(&mobius_ladder(MobiusSpec { vertices: 10 }).unwrap());
    let (up, down) = mirrored_runs(&m, 3, 200);
    let last = up.len() - 1;
    assert_eq!(readout(&up[last]).unwrap(), readout(&down[last]).unwrap().negated());
}

#[test]
fn decoupled_fixed_points() {
    let m = IsingModel::new(4);
    for p in [1.1, 1.5, 2.0] {
        // Round 1 of a two-round ramp runs at the final pump value.
        let schedule = PumpSchedule { p_start: 0.5, p_end: p, rounds: 2 };
        let engine = CimEngine::new(&m, CimParams { schedule, noise_amp: 0.0, ..CimParams::default() }).unwrap();
        let mut x = vec![0.3, -0.2, 0.05, -1.7];
        let mut rng = rng_from_seed(0);
        for _ in 0..20_000 {
            engine.step(&mut x, 1, &mut rng).unwrap();
        }
        let star = (p - 1.0f64).sqrt();
        for v in &x {
            assert!((v.abs() - star).abs() < 1e-6, "p = {p}: {v}");
        }
    }
}

#[test]
fn below_threshold_decay_is_monotone() {
    let m = IsingModel::new(3);
    let engine = CimEngine::new(
        &m,
        CimParams { schedule: PumpSchedule { p_start: 0.8, p_end: 0.9, rounds: 2 }, noise_amp: 0.0, ..CimParams::default() },
    )
    .unwrap();
    let mut x = vec![0.01, -0.02, 0.005];
    let mut rng = rng_from_seed(0);
    for _ in 0..200 {
        let before = x.clone();
        engine.step(&mut x, 0, &mut rng).unwrap();
        for (a, b) in before.iter().zip(&x) {
            assert!(b.abs() < a.abs());
        }
    }
}

#[test]
fn ferromagnetic_pair_aligns() {
    let m = IsingModel::from_couplings(2, [(0, 1, 1.0)]).unwrap();
    let solver = CimSolver::default();
    let hits = (0..100).filter(|&k| solver.solve(&m, run_seed(1, 0, k)).unwrap().energy == -1.0).count();
    assert!(hits >= 90, "{hits}");
}

#[test]
fn mobius_20_best_of_100_is_optimal() {
    let g = mobius_ladder(MobiusSpec { vertices: 20 }).unwrap();
    let m = maxcut_to_ising(&g);
    let exact = brute_force(&m, 1).unwrap().min_energy;
    assert_eq!(exact, cut_to_energy(g.total_weight(), mobius_max_cut(20).unwrap()));
    let best = cim_core::engine::best_of(&m, &CimParams::default(), 100, 9).unwrap();
    assert_eq!(best.energy, exact);
}

#[test]
fn late_energy_trend_is_downhill() {
    let g = mobius_ladder(MobiusSpec { vertices: 40 }).unwrap();
    let m = maxcut_to_ising(&g);
    let rounds = CimParams::default().schedule.rounds;
    let runs = 30;
    let mut mean = vec![0.0; rounds];
    for k in 0..runs {
        let t = simulate(&m, &CimParams { seed: run_seed(4, 0, k), ..CimParams::default() }, None).unwrap();
        for (acc, e) in mean.iter_mut().zip(&t.energy) {
            *acc += e / runs as f64;
        }
    }
    // Past threshold the ensemble energy does not rise between windows of 500 rounds.
    let window = |a: usize| mean[a..a + 500].iter().sum::<f64>() / 500.0;
    let starts: Vec<usize> = (rounds / 2..rounds - 499).step_by(500).collect();
    for w in starts.windows(2) {
        assert!(window(w[1]) <= window(w[0]) + 1e-9, "{} -> {}", window(w[0]), window(w[1]));
    }
}

#[test]
fn analog_feedback_runs() {
    let g = mobius_ladder(MobiusSpec { vertices: 12 }).unwrap();
    let m = maxcut_to_ising(&g);
    let p = CimParams { feedback: FeedbackMode::Analog, r: 0.5, ..CimParams::default() };
    let best = cim_core::engine::best_of(&m, &p, 20, 0).unwrap();
    assert_eq!(best.energy, cut_to_energy(g.total_weight(), mobius_max_cut(12).unwrap()));
    assert_eq!(ising_energy(&m, &best.spins).unwrap(), best.energy);
}
