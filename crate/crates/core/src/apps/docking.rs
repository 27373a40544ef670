//! Docking as atom-to-lattice-point matching.
//!
//! `x_ij = 1` places atom `i` on grid point `j`. The objective is
//!
//! ```text
//! Σ w_ij x_ij + K_dist Σ u_ijkl x_ij x_kl + K_mono Σ v_ijkl x_ij x_kl
//! ```
//!
//! where `v` marks pairs that reuse an atom or a grid point and `u` marks pairs
//! whose grid distance disagrees with the atom distance by more than `eps_dist`.
//! The quadratic form `x_ij²` of the first sum equals `x_ij` for binary
//! variables and is stored as a linear term.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Point3, Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::qubo::QuboModel;
use crate::rng::rng_from_seed;

/// RMSD below which a docking result counts as acceptable, in Å.
pub const ACCEPTABLE_RMSD: f64 = 2.0;

/// Labeled point in Å.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Site {
    pub pos: [f64; 3],
    pub label: String,
}

impl Site {
    pub fn new(pos: [f64; 3], label: &str) -> Self {
        Site { pos, label: label.into() }
    }
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    libm::sqrt((0..3).map(|k| (a[k] - b[k]) * (a[k] - b[k])).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DockingInstance {
    atoms: Vec<Site>,
    grid: Vec<Site>,
    /// Row-major `n × N` match weights.
    weights: Vec<f64>,
    eps_dist: f64,
    k_dist: f64,
    k_mono: f64,
}

impl DockingInstance {
    /// `weights[i][j]` is the energy of placing atom `i` on grid point `j`.
    ///
    /// Both penalties must exceed `max|w| · n`, which makes every constraint
    /// violation cost more than any matching can gain.
    pub fn new(atoms: Vec<Site>, grid: Vec<Site>, weights: Vec<Vec<f64>>, eps_dist: f64, k_dist: f64, k_mono: f64) -> Result<Self> {
        let (n, big_n) = (atoms.len(), grid.len());
        if n == 0 {
            return Err(invalid("docking needs at least one atom"));
        }
        if big_n < n {
            return Err(invalid(format!("{big_n} grid points cannot host {n} atoms")));
        }
        if weights.len() != n {
            return Err(Error::Dimension { expected: n, actual: weights.len() });
        }
        if let Some(row) = weights.iter().find(|r| r.len() != big_n) {
            return Err(Error::Dimension { expected: big_n, actual: row.len() });
        }
        let coords = atoms.iter().chain(&grid).flat_map(|s| s.pos);
        if weights.iter().flatten().copied().chain(coords).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(eps_dist > 0.0 && eps_dist.is_finite()) {
            return Err(invalid(format!("eps_dist must be positive, got {eps_dist}")));
        }
        let w_max = weights.iter().flatten().fold(0.0f64, |m, w| m.max(libm::fabs(*w)));
        let need = w_max * n as f64;
        for (name, k) in [("K_dist", k_dist), ("K_mono", k_mono)] {
            if !(k > need && k.is_finite()) {
                return Err(invalid(format!("{name} = {k} must exceed max|w|·n = {need}")));
            }
        }
        let weights = weights.into_iter().flatten().collect();
        Ok(DockingInstance { atoms, grid, weights, eps_dist, k_dist, k_mono })
    }

    /// Instance with the same weight `w` for every atom–grid pair.
    pub fn uniform(atoms: Vec<Site>, grid: Vec<Site>, w: f64, eps_dist: f64, k_dist: f64, k_mono: f64) -> Result<Self> {
        let weights = vec![vec![w; grid.len()]; atoms.len()];
        Self::new(atoms, grid, weights, eps_dist, k_dist, k_mono)
    }

    pub fn atoms(&self) -> &[Site] {
        &self.atoms
    }

    pub fn grid(&self) -> &[Site] {
        &self.grid
    }

    pub fn weight(&self, atom: usize, point: usize) -> f64 {
        self.weights[atom * self.grid.len() + point]
    }

    pub fn eps_dist(&self) -> f64 {
        self.eps_dist
    }

    pub fn penalties(&self) -> (f64, f64) {
        (self.k_dist, self.k_mono)
    }

    pub fn num_variables(&self) -> usize {
        self.atoms.len() * self.grid.len()
    }

    pub fn variable(&self, atom: usize, point: usize) -> usize {
        atom * self.grid.len() + point
    }

    fn distance_mismatch(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        libm::fabs(dist(&self.atoms[i].pos, &self.atoms[k].pos) - dist(&self.grid[j].pos, &self.grid[l].pos))
    }
}

pub fn docking_qubo(inst: &DockingInstance) -> QuboModel {
    let (n, big_n) = (inst.atoms.len(), inst.grid.len());
    let mut q = QuboModel::new(n * big_n);
    for i in 0..n {
        for j in 0..big_n {
            let a = inst.variable(i, j);
            q.add_linear(a, inst.weight(i, j)).expect("in range");
            for k in i..n {
                let l_start = if k == i { j + 1 } else { 0 };
                for l in l_start..big_n {
                    let b = inst.variable(k, l);
                    let mono = (i == k) != (j == l);
                    let far = i != k && j != l && inst.distance_mismatch(i, j, k, l) > inst.eps_dist;
                    let coeff = if mono { inst.k_mono } else if far { inst.k_dist } else { 0.0 };
                    if coeff != 0.0 {
                        q.add_quadratic(a, b, coeff).expect("in range");
                    }
                }
            }
        }
    }
    q
}

/// Atom `i` sits on grid point `assignment[i]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pose {
    pub assignment: Vec<usize>,
    pub coordinates: Vec<[f64; 3]>,
}

/// A broken constraint found while decoding.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    Unmatched { atom: usize },
    AtomOnSeveralPoints { atom: usize, points: Vec<usize> },
    PointShared { point: usize, atoms: Vec<usize> },
    Distance { atoms: (usize, usize), points: (usize, usize), mismatch: f64 },
}

/// Reads a pose from the `i·N + j` bit layout, or lists every violated constraint.
pub fn decode_pose(x: &[u8], inst: &DockingInstance) -> Result<core::result::Result<Pose, Vec<Violation>>> {
    let (n, big_n) = (inst.atoms.len(), inst.grid.len());
    if x.len() != n * big_n {
        return Err(Error::Dimension { expected: n * big_n, actual: x.len() });
    }
    let on = |i: usize, j: usize| x[i * big_n + j] != 0;
    let mut violations = Vec::new();
    let mut assignment = Vec::with_capacity(n);
    for i in 0..n {
        let points: Vec<usize> = (0..big_n).filter(|&j| on(i, j)).collect();
        match points.len() {
            0 => violations.push(Violation::Unmatched { atom: i }),
            1 => assignment.push(points[0]),
            _ => violations.push(Violation::AtomOnSeveralPoints { atom: i, points }),
        }
    }
    for j in 0..big_n {
        let atoms: Vec<usize> = (0..n).filter(|&i| on(i, j)).collect();
        if atoms.len() > 1 {
            violations.push(Violation::PointShared { point: j, atoms });
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..big_n).filter(move |&j| on(i, j)).map(move |j| (i, j))).collect();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a + 1..] {
            if i != k && j != l {
                let mismatch = inst.distance_mismatch(i, j, k, l);
                if mismatch > inst.eps_dist {
                    violations.push(Violation::Distance { atoms: (i, k), points: (j, l), mismatch });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Ok(Err(violations));
    }
    let coordinates = assignment.iter().map(|&j| inst.grid[j].pos).collect();
    Ok(Ok(Pose { assignment, coordinates }))
}

/// Root mean square deviation between index-matched point sets, without realignment.
pub fn rmsd(pose: &[[f64; 3]], crystal: &[[f64; 3]]) -> Result<f64> {
    if pose.len() != crystal.len() {
        return Err(Error::Dimension { expected: crystal.len(), actual: pose.len() });
    }
    if pose.is_empty() {
        return Err(invalid("RMSD of an empty point set"));
    }
    let sum: f64 = pose.iter().zip(crystal).map(|(a, b)| dist(a, b) * dist(a, b)).sum();
    Ok(libm::sqrt(sum / pose.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MrmsdReport {
    pub mrmsd: f64,
    pub best_pose: usize,
    /// `mrmsd < ACCEPTABLE_RMSD`.
    pub acceptable: bool,
}

/// Smallest RMSD over a set of poses.
pub fn mrmsd(poses: &[Pose], crystal: &[[f64; 3]]) -> Result<MrmsdReport> {
    let mut best: Option<(usize, f64)> = None;
    for (k, pose) in poses.iter().enumerate() {
        let r = rmsd(&pose.coordinates, crystal)?;
        if best.is_none_or(|(_, b)| r < b) {
            best = Some((k, r));
        }
    }
    let (best_pose, mrmsd) = best.ok_or_else(|| invalid("mRMSD needs at least one pose"))?;
    Ok(MrmsdReport { mrmsd, best_pose, acceptable: mrmsd < ACCEPTABLE_RMSD })
}

/// Docking test case with a known answer.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDocking {
    pub instance: DockingInstance,
    /// Bound-state atom coordinates; they are the first `n` grid points.
    pub crystal: Vec<[f64; 3]>,
}

const ELEMENTS: [&str; 6] = ["C", "N", "O", "S", "P", "F"];

/// Builds a ligand of `atoms` distinct elements whose bound coordinates sit on
/// the grid next to `decoys` hydrogen-labeled points.
///
/// The ligand is given in a randomly rotated and shifted frame, so only its
/// internal distances tie it to the crystal. Matching labels score −1, other
/// pairs −0.25, and both penalties are `max|w|·n + 1`.
pub fn synthetic_docking(atoms: usize, decoys: usize, seed: u64) -> Result<SyntheticDocking> {
    if atoms == 0 || atoms > ELEMENTS.len() {
        return Err(invalid(format!("synthetic ligands have 1 to {} atoms, got {atoms}", ELEMENTS.len())));
    }
    let mut rng = rng_from_seed(seed);
    let box_point = |rng: &mut crate::rng::SimRng| [0, 1, 2].map(|_| rng.random_range(-4.0..4.0));

    let mut crystal: Vec<[f64; 3]> = Vec::with_capacity(atoms);
    while crystal.len() < atoms {
        let p = box_point(&mut rng);
        if crystal.iter().all(|c| dist(c, &p) > 1.2) {
            crystal.push(p);
        }
    }
    let mut grid: Vec<Site> = crystal.iter().zip(ELEMENTS).map(|(p, e)| Site::new(*p, e)).collect();
    while grid.len() < atoms + decoys {
        let p = box_point(&mut rng);
        if grid.iter().all(|g| dist(&g.pos, &p) > 1.0) {
            grid.push(Site::new(p, "H"));
        }
    }

    let q = [0; 4].map(|_| StandardNormal.sample(&mut rng));
    let rot = UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]));
    let shift = Vector3::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
    let ligand: Vec<Site> = crystal
        .iter()
        .zip(ELEMENTS)
        .map(|(c, e)| {
            let p = rot * Point3::new(c[0], c[1], c[2]) + shift;
            Site::new([p.x, p.y, p.z], e)
        })
        .collect();

    let weights = ligand
        .iter()
        .map(|a| grid.iter().map(|g| if g.label == a.label { -1.0 } else { -0.25 }).collect())
        .collect();
    let k = atoms as f64 + 1.0;
    let instance = DockingInstance::new(ligand, grid, weights, 0.1, k, k)?;
    Ok(SyntheticDocking { instance, crystal })
}
