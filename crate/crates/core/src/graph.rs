//! Weighted undirected graphs for Max-Cut and their Ising encoding.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::ising::{IsingModel, SpinConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected graph without self-loops or parallel edges. Edges are stored with `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(invalid(format!("self-loop on vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= n {
                return Err(invalid(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite);
            }
            if !seen.insert((u, v)) {
                return Err(invalid(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, w });
        }
        Ok(Graph { n, edges: out })
    }

    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// True when every weight is an integer, so cut values are integral.
    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|e| libm::trunc(e.w) == e.w)
    }
}

/// Edge density `2|E| / (n(n−1))`.
pub fn density(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Err(invalid(format!("density undefined for {} vertices", g.n())));
    }
    let n = g.n() as f64;
    Ok(2.0 * g.num_edges() as f64 / (n * (n - 1.0)))
}

/// Antiferromagnetic encoding `J_uv = −w_uv`, so that `Cut(σ) = (W − H(σ))/2`.
pub fn maxcut_to_ising(g: &Graph) -> IsingModel {
    IsingModel::from_couplings(g.n(), g.edges().iter().map(|e| (e.u, e.v, -e.w)))
        .expect("graph invariants imply model invariants")
}

/// Total weight of edges whose endpoints carry different spins.
pub fn cut_value(g: &Graph, partition: &SpinConfig) -> Result<f64> {
    if partition.len() != g.n() {
        return Err(Error::Dimension { expected: g.n(), actual: partition.len() });
    }
    Ok(g.edges()
        .iter()
        .filter(|e| partition.get(e.u) != partition.get(e.v))
        .map(|e| e.w)
        .sum())
}

/// Converts an energy of the [`maxcut_to_ising`] model into a cut value.
pub fn energy_to_cut(total_weight: f64, energy: f64) -> f64 {
    0.5 * (total_weight - energy)
}

/// Converts a cut value into the energy of the [`maxcut_to_ising`] model.
pub fn cut_to_energy(total_weight: f64, cut: f64) -> f64 {
    total_weight - 2.0 * cut
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::ising_energy;

    fn triangle() -> Graph {
        Graph::unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn graph_invariants() {
        assert!(Graph::unweighted(3, [(1, 1)]).is_err());
        assert!(Graph::unweighted(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::unweighted(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn single_edge_cut_and_energy() {
        let g = Graph::unweighted(2, [(0, 1)]).unwrap();
        let m = maxcut_to_ising(&g);
        let s = SpinConfig::new(alloc::vec![1, -1]).unwrap();
        let h = ising_energy(&m, &s).unwrap();
        assert_eq!(h, -1.0);
        assert_eq!(energy_to_cut(1.0, h), 1.0);
        assert_eq!(cut_value(&g, &s).unwrap(), 1.0);
    }

    #[test]
    fn triangle_cuts() {
        let g = triangle();
        let s = SpinConfig::new(alloc::vec![1, -1, -1]).unwrap();
        assert_eq!(cut_value(&g, &s).unwrap(), 2.0);
        assert_eq!(cut_value(&g, &SpinConfig::uniform(3, true)).unwrap(), 0.0);
        assert!(cut_value(&g, &SpinConfig::uniform(2, true)).is_err());
    }

    #[test]
    fn empty_graph_is_flat() {
        let g = Graph::unweighted(4, []).unwrap();
        let m = maxcut_to_ising(&g);
        for bits in 0..16 {
            let s = SpinConfig::from_bits(4, bits);
            assert_eq!(ising_energy(&m, &s).unwrap(), 0.0);
            assert_eq!(cut_value(&g, &s).unwrap(), 0.0);
        }
    }

    #[test]
    fn density_examples() {
        let k4 = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(density(&k4).unwrap(), 1.0);
        assert_eq!(density(&Graph::unweighted(10, []).unwrap()).unwrap(), 0.0);
        assert!(density(&Graph::unweighted(1, []).unwrap()).is_err());
    }
}
