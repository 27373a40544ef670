use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ising::{ising_energy, IsingModel, SpinConfig};

/// Largest spin count accepted by [`brute_force`].
pub const MAX_EXHAUSTIVE_SPINS: usize = 24;

/// Default cap on the number of stored optima.
pub const DEFAULT_ARGMIN_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveResult {
    pub min_energy: f64,
    /// Optimal configurations in enumeration order, at most `cap` of them.
    pub optima: Vec<SpinConfig>,
    /// Number of optimal configurations found, not limited by the cap.
    pub degeneracy: u64,
}

/// Exact minimum over all `2^n` configurations, visited in Gray-code order with
/// incremental local fields.
pub fn brute_force(model: &IsingModel, cap: usize) -> Result<ExhaustiveResult> {
    let n = model.n();
    if n > MAX_EXHAUSTIVE_SPINS {
        return Err(Error::TooLarge { n, limit: MAX_EXHAUSTIVE_SPINS });
    }
    let adj = model.adjacency();
    let field = model.field().map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; n]);

    let scale = 1.0
        + model.couplings().map(|(_, _, v)| libm::fabs(v)).sum::<f64>()
        + field.iter().map(|v| libm::fabs(*v)).sum::<f64>();
    let slack = 1e-9 * scale;

    let mut spins = vec![1.0f64; n];
    let mut local: Vec<f64> = (0..n).map(|i| adj.weighted_sum(i, &spins) + field[i]).collect();
    let mut energy = ising_energy(model, &SpinConfig::uniform(n, true))?;
    let mut state: u64 = 0;

    let mut best = energy;
    let mut candidates: Vec<u64> = vec![0];
    let mut degeneracy: u64 = 1;
    // Candidates are kept generously so exact re-evaluation can pick the true ties.
    let keep = cap.max(1).saturating_mul(4);

    for k in 1u64..(1u64 << n) {
        let i = k.trailing_zeros() as usize;
        energy += 2.0 * spins[i] * local[i];
        spins[i] = -spins[i];
        let s = spins[i];
        for &(j, v) in adj.neighbors(i) {
            local[j] += 2.0 * v * s;
        }
        state ^= 1 << i;

        if energy < best - slack {
            best = energy;
            candidates.clear();
            candidates.push(state);
            degeneracy = 1;
        } else if energy <= best + slack {
            degeneracy += 1;
            if candidates.len() < keep {
                candidates.push(state);
            }
        }
    }

    let mut scored: Vec<(f64, SpinConfig)> = candidates
        .into_iter()
        .map(|bits| {
            let cfg = SpinConfig::from_bits(n, bits);
            (ising_energy(model, &cfg).expect("sized to n"), cfg)
        })
        .collect();
    let min_energy = scored.iter().map(|(e, _)| *e).fold(f64::INFINITY, f64::min);
    scored.retain(|(e, _)| *e <= min_energy + slack);
    let optima: Vec<SpinConfig> = scored.into_iter().map(|(_, c)| c).take(cap.max(1)).collect();
    Ok(ExhaustiveResult { min_energy, optima, degeneracy })
}
