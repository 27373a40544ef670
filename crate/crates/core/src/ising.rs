//! Ising spin configurations and models.
//!
//! Energies follow `H(σ) = −Σ_{i<j} J_ij σ_i σ_j − Σ_i h_i σ_i + offset`, with every
//! unordered pair counted once. Couplings written with both triangles of a
//! symmetric matrix must be halved on import; [`IsingModel::from_dense_symmetric`]
//! does that.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// A vector of ±1 spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<i8>", into = "Vec<i8>"))]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(pos) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(invalid(format!("spin {pos} is {}, expected +1 or -1", spins[pos])));
        }
        Ok(SpinConfig(spins))
    }

    pub fn uniform(n: usize, up: bool) -> Self {
        SpinConfig(vec![if up { 1 } else { -1 }; n])
    }

    /// Spin `i` is −1 exactly when bit `i` of `bits` is set.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SpinConfig((0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Maps binary variables through `σ = 2x − 1`.
    pub fn from_binary(x: &[u8]) -> Result<Self> {
        x.iter()
            .map(|&b| match b {
                0 => Ok(-1),
                1 => Ok(1),
                other => Err(invalid(format!("binary value {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SpinConfig)
    }

    /// Inverse of [`SpinConfig::from_binary`]: `x = (1 + σ)/2`.
    pub fn to_binary(&self) -> Vec<u8> {
        self.0.iter().map(|&s| u8::from(s == 1)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        SpinConfig(self.0.iter().map(|&s| -s).collect())
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SpinConfig::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Self {
        s.0
    }
}

/// Ising model with sparse pair couplings, an optional linear field and a constant offset.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    field: Option<Vec<f64>>,
    offset: f64,
}

impl IsingModel {
    pub fn new(n: usize) -> Self {
        IsingModel { n, couplings: BTreeMap::new(), field: None, offset: 0.0 }
    }

    /// Builds a model from `(i, j, J)` triples; each unordered pair may appear once.
    pub fn from_couplings<I>(n: usize, couplings: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut model = IsingModel::new(n);
        for (i, j, value) in couplings {
            let key = model.pair_key(i, j)?;
            if model.couplings.insert(key, value).is_some() {
                return Err(invalid(format!("duplicate coupling for pair ({}, {})", key.0, key.1)));
            }
        }
        Ok(model)
    }

    /// Reads the upper triangle of `J_ij + J_ji` halved, i.e. a matrix whose
    /// double sum over both triangles defines the coupling.
    pub fn from_dense_symmetric(matrix: &[Vec<f64>]) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|row| row.len() != n) {
            return Err(Error::Dimension { expected: n, actual: row.len() });
        }
        let mut model = IsingModel::new(n);
        for i in 0..n {
            for j in i + 1..n {
                let value = 0.5 * (matrix[i][j] + matrix[j][i]);
                if value != 0.0 {
                    model.couplings.insert((i, j), value);
                }
            }
        }
        Ok(model)
    }

    fn pair_key(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        if i == j {
            return Err(invalid(format!("self-coupling on spin {i}")));
        }
        let key = if i < j { (i, j) } else { (j, i) };
        if key.1 >= self.n {
            return Err(invalid(format!("coupling index {} out of range for {} spins", key.1, self.n)));
        }
        Ok(key)
    }

    /// Adds `value` to the coupling of the pair, creating it if absent.
    pub fn add_coupling(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let key = self.pair_key(i, j)?;
        *self.couplings.entry(key).or_insert(0.0) += value;
        Ok(())
    }

    pub fn with_field(mut self, field: Vec<f64>) -> Result<Self> {
        if field.len() != self.n {
            return Err(Error::Dimension { expected: self.n, actual: field.len() });
        }
        self.field = Some(field);
        Ok(self)
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn add_field(&mut self, i: usize, value: f64) -> Result<()> {
        if i >= self.n {
            return Err(invalid(format!("field index {i} out of range for {} spins", self.n)));
        }
        let n = self.n;
        self.field.get_or_insert_with(|| vec![0.0; n])[i] += value;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn field(&self) -> Option<&[f64]> {
        self.field.as_deref()
    }

    /// True when no spin carries a nonzero linear field.
    pub fn is_field_free(&self) -> bool {
        self.field.as_ref().map_or(true, |h| h.iter().all(|&v| v == 0.0))
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.couplings.get(&key).copied().unwrap_or(0.0)
    }

    /// Couplings as `(i, j, J)` with `i < j`, in ascending pair order.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.couplings.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings.len()
    }

    /// Symmetric dense coupling matrix with zero diagonal (both triangles hold `J_ij`).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n]; self.n];
        for (i, j, v) in self.couplings() {
            dense[i][j] = v;
            dense[j][i] = v;
        }
        dense
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_model(self)
    }

    /// Copy with every coupling and field multiplied by `factor`; the offset is kept.
    pub fn scaled(&self, factor: f64) -> IsingModel {
        IsingModel {
            n: self.n,
            couplings: self.couplings.iter().map(|(&k, &v)| (k, v * factor)).collect(),
            field: self.field.as_ref().map(|h| h.iter().map(|v| v * factor).collect()),
            offset: self.offset,
        }
    }

    /// `max_i Σ_j |J_ij|`, zero for an uncoupled model.
    pub fn max_abs_row_sum(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for (i, j, v) in self.couplings() {
            rows[i] += libm::fabs(v);
            rows[j] += libm::fabs(v);
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

/// Compressed symmetric neighbour lists built from an [`IsingModel`].
#[derive(Debug, Clone)]
pub struct Adjacency {
    starts: Vec<usize>,
    entries: Vec<(usize, f64)>,
}

impl Adjacency {
    fn from_model(model: &IsingModel) -> Self {
        let n = model.n();
        let mut degree = vec![0usize; n];
        for (i, j, _) in model.couplings() {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut starts = Vec::with_capacity(n + 1);
        starts.push(0);
        for d in &degree {
            starts.push(starts.last().unwrap() + d);
        }
        let mut cursor = starts[..n].to_vec();
        let mut entries = vec![(0usize, 0.0); starts[n]];
        for (i, j, v) in model.couplings() {
            entries[cursor[i]] = (j, v);
            cursor[i] += 1;
            entries[cursor[j]] = (i, v);
            cursor[j] += 1;
        }
        Adjacency { starts, entries }
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.entries[self.starts[i]..self.starts[i + 1]]
    }

    /// `Σ_j J_ij s_j` over any real-valued state.
    pub fn weighted_sum<T: Copy + Into<f64>>(&self, i: usize, state: &[T]) -> f64 {
        self.neighbors(i).iter().map(|&(j, v)| v * state[j].into()).sum()
    }
}

/// Evaluates the Ising energy of `spins` under `model`.
pub fn ising_energy(model: &IsingModel, spins: &SpinConfig) -> Result<f64> {
    if spins.len() != model.n() {
        return Err(Error::Dimension { expected: model.n(), actual: spins.len() });
    }
    let s = spins.as_slice();
    let mut energy = model.offset();
    for (i, j, v) in model.couplings() {
        energy -= v * f64::from(s[i]) * f64::from(s[j]);
    }
    if let Some(h) = model.field() {
        for (hi, &si) in h.iter().zip(s) {
            energy -= hi * f64::from(si);
        }
    }
    Ok(energy)
}

/// Replaces the linear field by couplings to an extra ancilla spin (index `n`).
///
/// With the ancilla fixed at +1 the original energy is recovered; the global
/// flip symmetry of the field-free model maps the −1 sector onto it, so both
/// models share the same minimum.
pub fn absorb_field(model: &IsingModel) -> IsingModel {
    let n = model.n();
    let mut out = IsingModel {
        n: n + 1,
        couplings: model.couplings.clone(),
        field: None,
        offset: model.offset(),
    };
    if let Some(h) = model.field() {
        for (i, &hi) in h.iter().enumerate() {
            if hi != 0.0 {
                out.couplings.insert((i, n), hi);
            }
        }
    }
    out
}

/// Maps a configuration of an [`absorb_field`] model back to the original spins,
/// gauge-flipping so that the ancilla reads +1.
pub fn restore_from_ancilla(extended: &SpinConfig) -> SpinConfig {
    let n = extended.len() - 1;
    let sign = extended.get(n);
    SpinConfig(extended.as_slice()[..n].iter().map(|&s| s * sign).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn spins(v: &[i8]) -> SpinConfig {
        SpinConfig::new(v.to_vec()).unwrap()
    }

    #[test]
    fn energy_examples() {
        let single = IsingModel::new(1);
        assert_eq!(ising_energy(&single, &spins(&[1])).unwrap(), 0.0);

        let pair = IsingModel::from_couplings(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(ising_energy(&pair, &spins(&[1, 1])).unwrap(), -1.0);

        let triangle = IsingModel::from_couplings(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(ising_energy(&triangle, &spins(&[1, 1, -1])).unwrap(), 1.0);
    }

    #[test]
    fn energy_rejects_wrong_length() {
        let pair = IsingModel::from_couplings(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(
            ising_energy(&pair, &spins(&[1])),
            Err(Error::Dimension { expected: 2, actual: 1 })
        );
    }

    #[test]
    fn model_invariants_enforced() {
        assert!(IsingModel::from_couplings(3, [(1, 1, 1.0)]).is_err());
        assert!(IsingModel::from_couplings(3, [(0, 3, 1.0)]).is_err());
        assert!(IsingModel::from_couplings(3, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(SpinConfig::new(vec![1, 0]).is_err());
    }

    #[test]
    fn dense_import_halves_double_counted_pairs() {
        let m = IsingModel::from_dense_symmetric(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(m.coupling(0, 1), 2.0);
        assert_eq!(m.to_dense(), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn absorb_field_examples() {
        let plain = IsingModel::from_couplings(2, [(0, 1, -1.5)]).unwrap();
        let absorbed = absorb_field(&plain);
        assert_eq!(absorbed.n(), 3);
        assert_eq!(absorbed.num_couplings(), 1);

        let m = IsingModel::new(1).with_field(vec![2.0]).unwrap();
        let a = absorb_field(&m);
        assert_eq!(a.coupling(0, 1), 2.0);
        let best = [spins(&[1, 1]), spins(&[-1, 1])]
            .iter()
            .map(|s| ising_energy(&a, s).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, -2.0);
        assert_eq!(restore_from_ancilla(&spins(&[-1, -1])), spins(&[1]));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let m = IsingModel::from_couplings(3, [(0, 1, 0.5), (1, 2, -2.0)]).unwrap();
        let adj = m.adjacency();
        assert_eq!(adj.neighbors(1), &[(0, 0.5), (2, -2.0)]);
        assert_eq!(adj.weighted_sum(1, &[1i8, 1, -1]), 2.5);
        assert_eq!(m.max_abs_row_sum(), 2.5);
    }
}
