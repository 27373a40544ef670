//! Benchmark instance generators: Möbius ladders and seeded G(n, m) random graphs.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::ising::SpinConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MobiusSpec {
    pub vertices: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RandomGraphSpec {
    pub vertices: usize,
    pub density: f64,
    pub seed: u64,
}

impl RandomGraphSpec {
    /// Number of edges the generator realizes: `round(d·V(V−1)/2)` clamped to `[1, V(V−1)/2]`.
    pub fn edge_budget(&self) -> usize {
        let pairs = pair_count(self.vertices);
        let target = libm::round(self.density * pairs as f64) as usize;
        target.clamp(1, pairs.max(1))
    }
}

fn pair_count(v: usize) -> usize {
    v * v.saturating_sub(1) / 2
}

/// V-cycle plus the V/2 antipodal chords `i ↔ i + V/2`, unit weights.
pub fn mobius_ladder(spec: MobiusSpec) -> Result<Graph> {
    let v = spec.vertices;
    if v < 4 || v % 2 != 0 {
        return Err(invalid(format!("Möbius ladder needs an even vertex count >= 4, got {v}")));
    }
    let half = v / 2;
    let cycle = (0..v).map(|i| (i, (i + 1) % v));
    let chords = (0..half).map(|i| (i, i + half));
    let mut edges: Vec<(usize, usize)> = cycle.chain(chords).collect();
    edges.sort_by_key(|&(a, b)| (a.min(b), a.max(b)));
    Graph::unweighted(v, edges)
}

/// Maximum cut of the Möbius ladder on `v` vertices.
///
/// With `k = v/2` rungs the graph is bipartite for odd `k` (all `3k` edges cut).
/// For even `k`, each chord closes two odd cycles that share only that chord,
/// so a single uncut edge cannot break every odd cycle and the optimum is
/// `3k − 2`, attained by [`mobius_optimal_partition`].
pub fn mobius_max_cut(v: usize) -> Result<f64> {
    mobius_ladder(MobiusSpec { vertices: v })?;
    let k = v / 2;
    Ok(if k % 2 == 1 { (3 * k) as f64 } else { (3 * k - 2) as f64 })
}

/// An optimal partition: alternating spins, with the second half flipped when `V/2` is even.
pub fn mobius_optimal_partition(v: usize) -> Result<SpinConfig> {
    mobius_ladder(MobiusSpec { vertices: v })?;
    let k = v / 2;
    let spins = (0..v)
        .map(|i| {
            let alt: i8 = if i % 2 == 0 { 1 } else { -1 };
            if k % 2 == 0 && i >= k {
                -alt
            } else {
                alt
            }
        })
        .collect();
    SpinConfig::new(spins)
}

/// Uniform G(n, m) graph: exactly [`RandomGraphSpec::edge_budget`] distinct unit-weight
/// edges drawn without replacement, determined entirely by the seed.
pub fn random_graph(spec: RandomGraphSpec) -> Result<Graph> {
    let v = spec.vertices;
    if v < 2 {
        return Err(invalid(format!("random graph needs at least 2 vertices, got {v}")));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(invalid(format!("density must lie in (0, 1], got {}", spec.density)));
    }
    let pairs = pair_count(v);
    let m = spec.edge_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut picks = rand::seq::index::sample(&mut rng, pairs, m).into_vec();
    picks.sort_unstable();
    let edges = picks.into_iter().map(|k| unrank_pair(v, k));
    Graph::unweighted(v, edges)
}

/// Maps `k` in `0..V(V−1)/2` to the k-th pair `(u, v)`, `u < v`, in row-major order.
fn unrank_pair(v: usize, mut k: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = v - 1 - u;
        if k < row {
            return (u, u + 1 + k);
        }
        k -= row;
        u += 1;
    }
}
