//! Regenerates `data/reference_optima.json`.
//!
//! Each random instance gets `RESTARTS` independent long annealing runs. The
//! best cut is accepted only when several runs reach it, and the printed table
//! records how many did.
//!
//! cargo run --release -p cimsim --example derive_optima > crates/cimsim/data/reference_optima.json

use cim_core::generators::{random_graph, RandomGraphSpec};
use cim_core::graph::energy_to_cut;
use cim_core::maxcut_to_ising;
use cim_core::rng::run_seed;
use cim_core::solvers::{Annealer, Solver};
use cimsim::formats::write_edge_list;
use cimsim::manifest::sha256_hex;
use cimsim::optima::{random_id, ReferenceOptimum};

const RESTARTS: usize = 200;
const SWEEPS: usize = 20_000;
const MIN_AGREEING: usize = 5;

fn main() {
    let specs = [0.017, 0.398, 0.785].map(|density| RandomGraphSpec { vertices: 100, density, seed: 1 });
    let annealer = Annealer { sweeps: SWEEPS, temperatures: None };
    let mut table = Vec::new();
    for spec in specs {
        let graph = random_graph(spec).expect("valid spec");
        let model = maxcut_to_ising(&graph);
        let w = graph.total_weight();
        let cuts: Vec<f64> = (0..RESTARTS)
            .map(|r| energy_to_cut(w, annealer.solve(&model, run_seed(0xC0FFEE, 0, r)).expect("anneal").energy))
            .collect();
        let best = cuts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let hits = cuts.iter().filter(|&&c| c == best).count();
        eprintln!("{}: best cut {best} reached by {hits}/{RESTARTS} runs", random_id(&spec));
        assert!(hits >= MIN_AGREEING, "no consensus on {}", random_id(&spec));
        table.push(ReferenceOptimum {
            problem_id: random_id(&spec),
            vertices: spec.vertices,
            density: spec.density,
            seed: spec.seed,
            edges: graph.num_edges(),
            max_cut: best,
            graph_sha256: sha256_hex(write_edge_list(&graph).as_bytes()),
            method: format!("annealing consensus: best of {RESTARTS} runs x {SWEEPS} sweeps, reached by {hits}"),
        });
    }
    println!("{}", serde_json::to_string_pretty(&table).expect("serialize"));
}
