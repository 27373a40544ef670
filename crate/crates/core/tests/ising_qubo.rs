mod common;

use cim_core::generators::{random_graph, RandomGraphSpec};
use cim_core::graph::{cut_value, maxcut_to_ising};
use cim_core::solvers::brute_force;
use cim_core::{absorb_field, ising_energy, qubo_to_ising, qubo_value, Graph, SpinConfig};
use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn energy_matches_definition(d in dense_model(10, true), bits in any::<u64>()) {
        let n = d.h.len();
        let s = spins_of(n, bits);
        let e = ising_energy(&d.model(), &SpinConfig::new(s.clone()).unwrap()).unwrap();
        prop_assert!((e - d.energy(&s)).abs() < 1e-9);
    }

    #[test]
    fn global_flip_symmetry(d in dense_model(12, false), bits in any::<u64>()) {
        let m = d.model();
        let s = SpinConfig::new(spins_of(d.h.len(), bits)).unwrap();
        prop_assert_eq!(ising_energy(&m, &s).unwrap(), ising_energy(&m, &s.negated()).unwrap());
    }

    #[test]
    fn qubo_to_ising_is_pointwise_exact((lin, quad, off) in dense_qubo(12)) {
        let q = build_qubo(&lin, &quad, off);
        let ising = qubo_to_ising(&q);
        let n = lin.len();
        for bits in 0..1u64 << n {
            let x = binary_of(n, bits);
            let direct = naive_qubo(&lin, &quad, off, &x);
            prop_assert!((qubo_value(&q, &x).unwrap() - direct).abs() < 1e-9);
            let s = SpinConfig::from_binary(&x).unwrap();
            prop_assert!((ising_energy(&ising, &s).unwrap() - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn absorbed_field_keeps_optima(d in dense_model(10, true)) {
        let m = d.model();
        let ext = absorb_field(&m);
        prop_assert_eq!(ext.n(), m.n() + 1);
        prop_assert!(ext.is_field_free());
        let a = brute_force(&m, 1).unwrap().min_energy;
        let b = brute_force(&ext, 1).unwrap().min_energy;
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn brute_force_matches_enumeration(d in dense_model(12, true)) {
        let n = d.h.len();
        let best = (0..1u64 << n).map(|b| d.energy(&spins_of(n, b))).fold(f64::INFINITY, f64::min);
        let r = brute_force(&d.model(), 8).unwrap();
        prop_assert!((r.min_energy - best).abs() < 1e-9);
        let count = (0..1u64 << n).filter(|&b| d.energy(&spins_of(n, b)) <= best + 1e-9).count() as u64;
        prop_assert_eq!(r.degeneracy, count);
        for s in &r.optima {
            prop_assert!((d.energy(s.as_slice()) - best).abs() < 1e-9);
        }
    }
}

/// Cut by definition: weight of edges whose endpoints disagree.
fn naive_cut(g: &Graph, s: &[i8]) -> f64 {
    g.edges().iter().filter(|e| s[e.u] != s[e.v]).map(|e| e.w).sum()
}

#[test]
fn maxcut_identity_on_many_pairs() {
    use rand::Rng;
    let mut rng = cim_core::rng::rng_from_seed(5);
    let mut checked = 0;
    for g_seed in 0..100u64 {
        let v = rng.random_range(2..40);
        let d = rng.random_range(0.05..1.0);
        let mut g = random_graph(RandomGraphSpec { vertices: v, density: d, seed: g_seed }).unwrap();
        if g_seed % 2 == 1 {
            let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, rng.random_range(-3.0..3.0))).collect();
            g = Graph::new(v, edges).unwrap();
        }
        let m = maxcut_to_ising(&g);
        let w = g.total_weight();
        for _ in 0..100 {
            let s: Vec<i8> = (0..v).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            let cfg = SpinConfig::new(s.clone()).unwrap();
            let h = ising_energy(&m, &cfg).unwrap();
            let cut = naive_cut(&g, &s);
            assert!(((w - h) / 2.0 - cut).abs() < 1e-9);
            assert!((cut_value(&g, &cfg).unwrap() - cut).abs() < 1e-9);
            checked += 1;
        }
    }
    assert_eq!(checked, 10_000);
}
