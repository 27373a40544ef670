//! Reference Max-Cut optima for benchmark instances.
//!
//! Möbius ladders have a closed form. The random graphs ship as data: their
//! optima come from a consensus of long annealing runs (see the
//! `derive_optima` example) and are pinned so benchmarks stay fast.

use serde::{Deserialize, Serialize};

use cim_core::generators::{mobius_ladder, mobius_max_cut, random_graph, MobiusSpec, RandomGraphSpec};
use cim_core::Graph;

use crate::error::{CliError, CliResult};
use crate::formats::write_edge_list;
use crate::manifest::sha256_hex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceOptimum {
    pub problem_id: String,
    pub vertices: usize,
    pub density: f64,
    pub seed: u64,
    pub edges: usize,
    pub max_cut: f64,
    /// SHA-256 of the instance's edge-list text.
    pub graph_sha256: String,
    pub method: String,
}

const BUILTIN: &str = include_str!("../data/reference_optima.json");

pub fn builtin() -> Vec<ReferenceOptimum> {
    serde_json::from_str(BUILTIN).expect("bundled optima parse")
}

pub fn mobius_id(v: usize) -> String {
    format!("mobius-v{v}")
}

pub fn random_id(spec: &RandomGraphSpec) -> String {
    format!("random-v{}-d{}-s{}", spec.vertices, spec.density, spec.seed)
}

/// A benchmark instance with its id and, when known, its optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub graph: Graph,
    pub optimum: Option<f64>,
}

pub fn mobius_instance(v: usize) -> CliResult<Instance> {
    let graph = mobius_ladder(MobiusSpec { vertices: v })?;
    Ok(Instance { id: mobius_id(v), graph, optimum: Some(mobius_max_cut(v)?) })
}

pub fn random_instance(spec: RandomGraphSpec, table: &[ReferenceOptimum]) -> CliResult<Instance> {
    let graph = random_graph(spec)?;
    let optimum = lookup_by_graph(&graph, table);
    Ok(Instance { id: random_id(&spec), graph, optimum })
}

pub fn lookup_by_graph(g: &Graph, table: &[ReferenceOptimum]) -> Option<f64> {
    let hash = sha256_hex(write_edge_list(g).as_bytes());
    table.iter().find(|r| r.graph_sha256 == hash).map(|r| r.max_cut)
}

/// Parses `V:density:seed`.
pub fn parse_random_spec(s: &str) -> CliResult<RandomGraphSpec> {
    let bad = || CliError::input(format!("random graph spec {s:?} must read V:density:seed"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(RandomGraphSpec {
        vertices: parts[0].parse().map_err(|_| bad())?,
        density: parts[1].parse().map_err(|_| bad())?,
        seed: parts[2].parse().map_err(|_| bad())?,
    })
}
