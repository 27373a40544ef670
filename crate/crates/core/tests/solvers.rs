mod common;

use cim_core::generators::{mobius_ladder, mobius_max_cut, MobiusSpec};
use cim_core::graph::{cut_to_energy, maxcut_to_ising};
use cim_core::solvers::{batch_stats, brute_force, cut_threshold, Annealer, BatchConfig, Exhaustive, Goal, Solver};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn annealing_finds_small_optima(d in dense_model(16, true), seed in any::<u64>()) {
        let m = d.model();
        let exact = brute_force(&m, 1).unwrap().min_energy;
        let annealer = Annealer { sweeps: 2000, temperatures: None };
        let best = (0..5).map(|k| annealer.solve(&m, seed.wrapping_add(k)).unwrap().energy).fold(f64::INFINITY, f64::min);
        prop_assert!(best <= exact + 1e-9, "{} vs {}", best, exact);
    }

    #[test]
    fn success_rate_ordering(seed in any::<u64>()) {
        // GS ⊆ 98% ⊆ 95% success sets, so the rates are ordered for any solver.
        let g = mobius_ladder(MobiusSpec { vertices: 30 }).unwrap();
        let m = maxcut_to_ising(&g);
        let opt = mobius_max_cut(30).unwrap();
        let w = g.total_weight();
        let cfg = BatchConfig { runs_per_batch: 20, batches: 2, base_seed: seed };
        let sa = Annealer { sweeps: 20, temperatures: None };
        let rate = |f: f64| {
            let goal = Goal::Cut { total_weight: w, threshold: cut_threshold(opt, f, Some(1.0)) };
            batch_stats(&sa, &m, goal, "m30", cfg).unwrap().mean
        };
        let (gs, r98, r95) = (rate(1.0), rate(0.98), rate(0.95));
        prop_assert!(gs <= r98 && r98 <= r95);
    }
}

#[test]
fn annealing_success_on_small_models() {
    use rand::Rng;
    let mut rng = cim_core::rng::rng_from_seed(17);
    let mut hits = 0;
    let total = 100;
    for k in 0..total {
        let n = rng.random_range(2..=16);
        let mut m = cim_core::IsingModel::new(n);
        for i in 0..n {
            for j in i + 1..n {
                m.add_coupling(i, j, rng.random_range(-1.0..1.0)).unwrap();
            }
        }
        let exact = brute_force(&m, 1).unwrap().min_energy;
        if (Annealer { sweeps: 3000, temperatures: None }).solve(&m, k).unwrap().energy <= exact + 1e-9 {
            hits += 1;
        }
    }
    assert!(hits >= 99, "{hits}/{total}");
}

#[test]
fn exhaustive_solver_hits_mobius_optimum() {
    let g = mobius_ladder(MobiusSpec { vertices: 20 }).unwrap();
    let m = maxcut_to_ising(&g);
    let target = cut_to_energy(g.total_weight(), mobius_max_cut(20).unwrap());
    let s = Exhaustive.solve(&m, 0).unwrap();
    assert_eq!(s.energy, target);
    let stats = batch_stats(&Exhaustive, &m, Goal::Energy { target }, "m20", BatchConfig { runs_per_batch: 3, batches: 2, base_seed: 1 }).unwrap();
    assert_eq!((stats.mean, stats.std), (1.0, 0.0));
}

#[test]
fn unreachable_target_never_succeeds() {
    let g = mobius_ladder(MobiusSpec { vertices: 12 }).unwrap();
    let m = maxcut_to_ising(&g);
    let below = cut_to_energy(g.total_weight(), mobius_max_cut(12).unwrap()) - 1.0;
    let stats = batch_stats(&Annealer::default(), &m, Goal::Energy { target: below }, "m12", BatchConfig { runs_per_batch: 10, batches: 2, base_seed: 0 }).unwrap();
    assert_eq!(stats.mean, 0.0);
}

#[test]
fn batch_stats_are_reproducible() {
    let g = mobius_ladder(MobiusSpec { vertices: 16 }).unwrap();
    let m = maxcut_to_ising(&g);
    let goal = Goal::Cut { total_weight: g.total_weight(), threshold: mobius_max_cut(16).unwrap() };
    let cfg = BatchConfig { runs_per_batch: 10, batches: 3, base_seed: 42 };
    let sa = Annealer { sweeps: 30, temperatures: None };
    assert_eq!(batch_stats(&sa, &m, goal, "m16", cfg).unwrap(), batch_stats(&sa, &m, goal, "m16", cfg).unwrap());
}
