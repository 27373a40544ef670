//! Machine-readable run outputs and their readers.

use std::fmt::Write as _;

use cim_core::engine::Trajectory;
use cim_core::quantum::WignerGrid;
use cim_core::solvers::SuccessStats;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::formats::Real;

/// Result of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub problem: String,
    pub kind: String,
    pub engine: String,
    pub seed: u64,
    pub runs: usize,
    pub best_config: Vec<i8>,
    pub best_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_cut: Option<f64>,
    /// Binary assignment for QUBO inputs (`x = (1 + σ)/2`).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_x: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rounds_to_target: Option<usize>,
}

/// Success statistics of one problem at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub threshold_fraction: f64,
    pub optimum: f64,
    #[serde(flatten)]
    pub stats: SuccessStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub threshold_fraction: f64,
    pub problems: Vec<String>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Adjacent pairs where the success rate rises with problem order.
    pub inversions: usize,
    /// Inversions larger than one standard deviation of either side.
    pub significant_inversions: usize,
    pub non_increasing: bool,
}

impl TrendReport {
    /// Trend of success means in the given problem order. With a single batch
    /// the standard deviation is zero and every inversion counts as significant.
    pub fn from_entries(entries: &[&BenchEntry]) -> Self {
        let means: Vec<f64> = entries.iter().map(|e| e.stats.mean).collect();
        let stds: Vec<f64> = entries.iter().map(|e| e.stats.std).collect();
        let mut inversions = 0;
        let mut significant = 0;
        for k in 1..means.len() {
            let rise = means[k] - means[k - 1];
            if rise > 0.0 {
                inversions += 1;
                if rise > stds[k].max(stds[k - 1]) {
                    significant += 1;
                }
            }
        }
        TrendReport {
            threshold_fraction: entries.first().map_or(1.0, |e| e.threshold_fraction),
            problems: entries.iter().map(|e| e.stats.problem_id.clone()).collect(),
            means,
            stds,
            inversions,
            significant_inversions: significant,
            non_increasing: inversions == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub engine: String,
    pub results: Vec<BenchEntry>,
    pub trend: Vec<TrendReport>,
}

/// Sidecar written next to each Wigner CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerMeta {
    #[serde(rename = "S")]
    pub s: f64,
    pub gamma_s: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub n_max: usize,
    /// `|Tr ρ − 1|` of the stationary state.
    pub trace_residual: f64,
    /// `|Σ W Δx Δp − 1|` on the grid.
    pub integral_residual: f64,
    pub photon_number: f64,
    pub lobe_separation: f64,
    pub support_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerSummary {
    pub entries: Vec<WignerMeta>,
    /// Lobe separations strictly increase with S in the listed order.
    pub strictly_increasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub ks: f64,
    pub n_a: usize,
    pub n_b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMask {
    pub alpha: f64,
    pub selected: Vec<usize>,
    /// Relevance-minus-redundancy score of the selection (higher is better).
    pub objective: f64,
}

/// `round,x_0,...,x_{n-1},energy` with 1-based rounds.
pub fn trajectory_csv(t: &Trajectory) -> String {
    let n = t.amplitudes.first().map_or(0, Vec::len);
    let mut out = String::from("round");
    for i in 0..n {
        let _ = write!(out, ",x_{i}");
    }
    out.push_str(",energy\n");
    for (k, (x, e)) in t.amplitudes.iter().zip(&t.energy).enumerate() {
        let _ = write!(out, "{}", k + 1);
        for v in x {
            let _ = write!(out, ",{}", Real(*v));
        }
        let _ = writeln!(out, ",{}", Real(*e));
    }
    out
}

/// Reads a trajectory CSV back into `(amplitudes, energies)`.
pub fn read_trajectory_csv(text: &str) -> CliResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| CliError::input("empty trajectory CSV"))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 2 || cols[0] != "round" || cols[cols.len() - 1] != "energy" {
        return Err(CliError::input("trajectory CSV header must be round,x_0,...,energy"));
    }
    let mut amplitudes = Vec::new();
    let mut energies = Vec::new();
    for (k, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|_| CliError::input(format!("bad number {v:?} in row {}", k + 1))))
            .collect::<CliResult<Vec<f64>>>()?;
        if vals.len() != cols.len() {
            return Err(CliError::input(format!("row {} has {} fields, expected {}", k + 1, vals.len(), cols.len())));
        }
        amplitudes.push(vals[1..vals.len() - 1].to_vec());
        energies.push(vals[vals.len() - 1]);
    }
    Ok((amplitudes, energies))
}

/// `x,p,W` rows, `x` varying slowest.
pub fn wigner_csv(w: &WignerGrid) -> String {
    let mut out = String::from("x,p,W\n");
    for (i, x) in w.x_axis.iter().enumerate() {
        for (j, p) in w.p_axis.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", Real(*x), Real(*p), Real(w.values[(i, j)]));
        }
    }
    out
}

pub fn read_wigner_csv(text: &str) -> CliResult<Vec<(f64, f64, f64)>> {
    let mut lines = text.lines();
    if lines.next() != Some("x,p,W") {
        return Err(CliError::input("Wigner CSV header must be x,p,W"));
    }
    lines
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(str::parse).collect::<Result<_, _>>().map_err(|_| CliError::input(format!("bad row {line:?}")))?;
            match v.as_slice() {
                [x, p, w] => Ok((*x, *p, *w)),
                _ => Err(CliError::input(format!("bad row {line:?}"))),
            }
        })
        .collect()
}

pub fn feature_masks_csv(masks: &[FeatureMask]) -> String {
    let mut out = String::from("alpha,selected,objective\n");
    for m in masks {
        let sel: Vec<String> = m.selected.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{},{},{}", Real(m.alpha), sel.join(" "), Real(m.objective));
    }
    out
}

pub fn read_feature_masks_csv(text: &str) -> CliResult<Vec<FeatureMask>> {
    let mut lines = text.lines();
    if lines.next() != Some("alpha,selected,objective") {
        return Err(CliError::input("mask CSV header must be alpha,selected,objective"));
    }
    lines
        .map(|line| {
            let bad = || CliError::input(format!("bad mask row {line:?}"));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let selected = f[1].split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| bad())?;
            Ok(FeatureMask { alpha: f[0].parse().map_err(|_| bad())?, selected, objective: f[2].parse().map_err(|_| bad())? })
        })
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}
