//! Feature selection as a QUBO trading label relevance against redundancy.
//!
//! With weight `α`, relevances `|ρV_j|` and pairwise correlations `|ρ_jk|`, a
//! subset `x` scores
//!
//! ```text
//! α Σ_j |ρV_j| x_j − (1 − α) Σ_j Σ_{k≠j} |ρ_jk| x_j x_k
//! ```
//!
//! and the QUBO is the negated score, with each unordered pair carrying `2|ρ_jk|`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::qubo::QuboModel;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSelectionInstance {
    rho_v: Vec<f64>,
    rho: DMatrix<f64>,
    alpha: f64,
}

impl FeatureSelectionInstance {
    /// `rho` must be symmetric with entries in `[0, 1]` and a zero diagonal.
    pub fn new(rho_v: Vec<f64>, rho: DMatrix<f64>, alpha: f64) -> Result<Self> {
        let n = rho_v.len();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::Dimension { expected: n, actual: rho.nrows().max(rho.ncols()) });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if let Some(v) = rho_v.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(invalid(format!("relevance magnitudes must be finite and >= 0, got {v}")));
        }
        for j in 0..n {
            if rho[(j, j)] != 0.0 {
                return Err(invalid(format!("correlation diagonal must be zero, got {} at {j}", rho[(j, j)])));
            }
            for k in j + 1..n {
                let (a, b) = (rho[(j, k)], rho[(k, j)]);
                if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                    return Err(invalid(format!("correlation magnitude at ({j}, {k}) outside [0, 1]")));
                }
                if libm::fabs(a - b) > 1e-12 {
                    return Err(invalid(format!("correlation matrix not symmetric at ({j}, {k})")));
                }
            }
        }
        Ok(FeatureSelectionInstance { rho_v, rho, alpha })
    }

    pub fn from_relevance(rel: &Relevance, alpha: f64) -> Result<Self> {
        Self::new(rel.rho_v.clone(), rel.rho.clone(), alpha)
    }

    pub fn len(&self) -> usize {
        self.rho_v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho_v.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.rho_v.clone(), self.rho.clone(), alpha)
    }

    pub fn rho_v(&self) -> &[f64] {
        &self.rho_v
    }

    pub fn rho(&self) -> &DMatrix<f64> {
        &self.rho
    }
}

pub fn feature_selection_qubo(inst: &FeatureSelectionInstance) -> QuboModel {
    let n = inst.len();
    let mut q = QuboModel::new(n);
    for j in 0..n {
        q.add_linear(j, -inst.alpha * inst.rho_v[j]).expect("in range");
        for k in j + 1..n {
            let c = 2.0 * (1.0 - inst.alpha) * inst.rho[(j, k)];
            if c != 0.0 {
                q.add_quadratic(j, k, c).expect("in range");
            }
        }
    }
    q
}

/// Relevance-minus-redundancy score of a selection mask; the QUBO value is its negation.
pub fn selection_score(inst: &FeatureSelectionInstance, mask: &[u8]) -> Result<f64> {
    if mask.len() != inst.len() {
        return Err(Error::Dimension { expected: inst.len(), actual: mask.len() });
    }
    let chosen: Vec<usize> = (0..mask.len()).filter(|&j| mask[j] != 0).collect();
    let relevance: f64 = chosen.iter().map(|&j| inst.rho_v[j]).sum();
    let redundancy: f64 = chosen.iter().flat_map(|&j| chosen.iter().map(move |&k| (j, k))).map(|(j, k)| inst.rho[(j, k)]).sum();
    Ok(inst.alpha * relevance - (1.0 - inst.alpha) * redundancy)
}

/// Absolute Pearson correlations of each feature with the label and with each other.
#[derive(Debug, Clone, PartialEq)]
pub struct Relevance {
    pub rho_v: Vec<f64>,
    pub rho: DMatrix<f64>,
    /// Features with zero variance; their correlations are reported as 0.
    pub constant_features: Vec<usize>,
    pub constant_label: bool,
}

fn centered(column: &[f64]) -> (Vec<f64>, f64) {
    let mean = column.iter().sum::<f64>() / column.len() as f64;
    let c: Vec<f64> = column.iter().map(|v| v - mean).collect();
    let norm = libm::sqrt(c.iter().map(|v| v * v).sum());
    (c, norm)
}

fn correlation(a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)) -> f64 {
    if a.1 == 0.0 || b.1 == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    libm::fabs(dot / (a.1 * b.1)).min(1.0)
}

/// `columns[j]` holds feature `j` over all rows.
pub fn pearson_matrix(columns: &[Vec<f64>], label: &[f64]) -> Result<Relevance> {
    let rows = label.len();
    if rows < 2 {
        return Err(invalid(format!("correlations need at least 2 rows, got {rows}")));
    }
    if let Some(c) = columns.iter().find(|c| c.len() != rows) {
        return Err(Error::Dimension { expected: rows, actual: c.len() });
    }
    if columns.iter().flatten().chain(label).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let y = centered(label);
    let feats: Vec<(Vec<f64>, f64)> = columns.iter().map(|c| centered(c)).collect();
    let n = feats.len();
    let rho_v = feats.iter().map(|f| correlation(f, &y)).collect();
    let mut rho = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in j + 1..n {
            let r = correlation(&feats[j], &feats[k]);
            rho[(j, k)] = r;
            rho[(k, j)] = r;
        }
    }
    let constant_features = (0..n).filter(|&j| feats[j].1 == 0.0).collect();
    Ok(Relevance { rho_v, rho, constant_features, constant_label: y.1 == 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::qubo_value;
    use alloc::vec;

    fn example(alpha: f64) -> FeatureSelectionInstance {
        let mut rho = DMatrix::zeros(3, 3);
        rho[(0, 1)] = 0.9;
        rho[(1, 0)] = 0.9;
        FeatureSelectionInstance::new(vec![0.6, 0.5, 0.4], rho, alpha).unwrap()
    }

    fn argmin(q: &QuboModel) -> (f64, Vec<u8>) {
        let n = q.n();
        (0..1u32 << n)
            .map(|bits| {
                let x: Vec<u8> = (0..n).map(|k| ((bits >> k) & 1) as u8).collect();
                (qubo_value(q, &x).unwrap(), x)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap()
    }

    #[test]
    fn three_feature_example() {
        let (_, x) = argmin(&feature_selection_qubo(&example(0.5)));
        assert!(x[0] + x[1] <= 1, "{x:?}");
        assert_eq!(x, vec![1, 0, 1]);
    }

    #[test]
    fn pure_relevance_selects_everything_relevant() {
        let (_, x) = argmin(&feature_selection_qubo(&example(1.0)));
        assert_eq!(x, vec![1, 1, 1]);
        let q = feature_selection_qubo(&example(1.0));
        assert_eq!(q.quadratic().count(), 0);
    }

    #[test]
    fn pure_redundancy_is_nonnegative() {
        let q = feature_selection_qubo(&example(0.0));
        let (v, _) = argmin(&q);
        assert_eq!(v, 0.0);
        assert_eq!(qubo_value(&q, &[0, 1, 0]).unwrap(), 0.0);
        assert!(qubo_value(&q, &[1, 1, 0]).unwrap() > 0.0);
    }

    #[test]
    fn score_is_negated_qubo_value() {
        let inst = example(0.3);
        let q = feature_selection_qubo(&inst);
        for bits in 0u8..8 {
            let x: Vec<u8> = (0..3).map(|k| (bits >> k) & 1).collect();
            assert!((qubo_value(&q, &x).unwrap() + selection_score(&inst, &x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn instance_validation() {
        let mut asym = DMatrix::zeros(2, 2);
        asym[(0, 1)] = 0.5;
        assert!(FeatureSelectionInstance::new(vec![0.1, 0.2], asym, 0.5).is_err());
        assert!(FeatureSelectionInstance::new(vec![0.1, 0.2], DMatrix::zeros(2, 2), 1.5).is_err());
        assert!(FeatureSelectionInstance::new(vec![-0.1, 0.2], DMatrix::zeros(2, 2), 0.5).is_err());
        assert!(FeatureSelectionInstance::new(vec![0.1], DMatrix::zeros(2, 2), 0.5).is_err());
    }

    #[test]
    fn pearson_examples() {
        let label = vec![1.0, 2.0, 3.0, 5.0];
        let neg: Vec<f64> = label.iter().map(|v| -v).collect();
        let r = pearson_matrix(&[label.clone(), neg], &label).unwrap();
        assert!((r.rho_v[0] - 1.0).abs() < 1e-15);
        assert!((r.rho_v[1] - 1.0).abs() < 1e-15);
        assert!((r.rho[(0, 1)] - 1.0).abs() < 1e-15);

        // a = (1,1,0,0), b = (1,0,1,0) are uncorrelated; c = (1,0,0,0) correlates
        // with each at (1/4 − 1/8)/√(1/4 · 3/16) = 1/√3.
        let a = vec![1.0, 1.0, 0.0, 0.0];
        let b = vec![1.0, 0.0, 1.0, 0.0];
        let c = vec![1.0, 0.0, 0.0, 0.0];
        let r = pearson_matrix(&[a, b], &c).unwrap();
        assert!(r.rho[(0, 1)].abs() < 1e-15);
        let expect = 1.0 / libm::sqrt(3.0);
        assert!((r.rho_v[0] - expect).abs() < 1e-15 && (r.rho_v[1] - expect).abs() < 1e-15);
    }

    #[test]
    fn pearson_flags_constant_columns() {
        let r = pearson_matrix(&[vec![2.0; 3], vec![1.0, 2.0, 4.0]], &[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.constant_features, vec![0]);
        assert_eq!(r.rho_v[0], 0.0);
        assert_eq!(r.rho[(0, 1)], 0.0);
        assert!(!r.constant_label);
        assert!(pearson_matrix(&[vec![1.0]], &[1.0]).is_err());
        assert!(pearson_matrix(&[vec![1.0, 2.0, 3.0]], &[1.0, 2.0]).is_err());
    }
}
