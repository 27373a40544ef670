//! Binary quadratic objectives and their exact Ising form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::ising::IsingModel;

/// `f(x) = Σ q_i x_i + Σ_{i<j} q_ij x_i x_j + offset` over `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    n: usize,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboModel {
    pub fn new(n: usize) -> Self {
        QuboModel { n, linear: vec![0.0; n], quadratic: BTreeMap::new(), offset: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn add_linear(&mut self, i: usize, value: f64) -> Result<()> {
        if i >= self.n {
            return Err(invalid(format!("linear index {i} out of range for {} variables", self.n)));
        }
        self.linear[i] += value;
        Ok(())
    }

    /// Accumulates onto the unordered pair `{i, j}`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i == j {
            return Err(invalid(format!("diagonal quadratic term on {i}; use a linear term")));
        }
        let key = if i < j { (i, j) } else { (j, i) };
        if key.1 >= self.n {
            return Err(invalid(format!("quadratic index {} out of range for {} variables", key.1, self.n)));
        }
        *self.quadratic.entry(key).or_insert(0.0) += value;
        Ok(())
    }

    pub fn quadratic(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.quadratic.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn quadratic_term(&self, i: usize, j: usize) -> f64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.quadratic.get(&key).copied().unwrap_or(0.0)
    }
}

/// Evaluates the QUBO objective on a 0/1 vector.
pub fn qubo_value(q: &QuboModel, x: &[u8]) -> Result<f64> {
    if x.len() != q.n() {
        return Err(Error::Dimension { expected: q.n(), actual: x.len() });
    }
    if let Some(pos) = x.iter().position(|&b| b > 1) {
        return Err(invalid(format!("x[{pos}] = {} is not binary", x[pos])));
    }
    let mut value = q.offset();
    for (qi, &xi) in q.linear().iter().zip(x) {
        if xi == 1 {
            value += qi;
        }
    }
    for (i, j, v) in q.quadratic() {
        if x[i] == 1 && x[j] == 1 {
            value += v;
        }
    }
    Ok(value)
}

/// Substitutes `x_i = (1 + σ_i)/2`.
///
/// A linear term `q x` becomes `q/2 + (q/2) σ`, i.e. field `−q/2`; a pair term
/// `q x_i x_j` becomes `q/4 (1 + σ_i + σ_j + σ_i σ_j)`, i.e. coupling `−q/4` and
/// field `−q/4` on both ends.
pub fn qubo_to_ising(q: &QuboModel) -> IsingModel {
    let n = q.n();
    let mut field = vec![0.0; n];
    let mut offset = q.offset();
    let mut model = IsingModel::new(n);
    for (i, &qi) in q.linear().iter().enumerate() {
        field[i] -= 0.5 * qi;
        offset += 0.5 * qi;
    }
    for (i, j, v) in q.quadratic() {
        if v == 0.0 {
            continue;
        }
        model.add_coupling(i, j, -0.25 * v).expect("indices validated by QuboModel");
        field[i] -= 0.25 * v;
        field[j] -= 0.25 * v;
        offset += 0.25 * v;
    }
    let model = model.with_offset(offset);
    if field.iter().any(|&h| h != 0.0) {
        model.with_field(field).expect("field sized to n")
    } else {
        model
    }
}
