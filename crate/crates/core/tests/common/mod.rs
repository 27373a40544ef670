#![allow(dead_code)]

use cim_core::{IsingModel, QuboModel};
use proptest::prelude::*;

/// Energy straight from the definition, over a dense coupling table.
pub fn naive_energy(j: &[Vec<f64>], h: &[f64], offset: f64, s: &[i8]) -> f64 {
    let n = s.len();
    let mut e = offset;
    for a in 0..n {
        e -= h[a] * s[a] as f64;
        for b in a + 1..n {
            e -= j[a][b] * s[a] as f64 * s[b] as f64;
        }
    }
    e
}

pub fn spins_of(n: usize, bits: u64) -> Vec<i8> {
    (0..n).map(|k| if (bits >> k) & 1 == 1 { -1 } else { 1 }).collect()
}

pub fn binary_of(n: usize, bits: u64) -> Vec<u8> {
    (0..n).map(|k| ((bits >> k) & 1) as u8).collect()
}

/// Dense couplings, field and offset that generated an [`IsingModel`].
#[derive(Debug, Clone)]
pub struct Dense {
    pub j: Vec<Vec<f64>>,
    pub h: Vec<f64>,
    pub offset: f64,
}

impl Dense {
    pub fn model(&self) -> IsingModel {
        let n = self.h.len();
        let mut m = IsingModel::new(n).with_offset(self.offset);
        for a in 0..n {
            for b in a + 1..n {
                if self.j[a][b] != 0.0 {
                    m.add_coupling(a, b, self.j[a][b]).unwrap();
                }
            }
        }
        if self.h.iter().any(|v| *v != 0.0) {
            m = m.with_field(self.h.clone()).unwrap();
        }
        m
    }

    pub fn energy(&self, s: &[i8]) -> f64 {
        naive_energy(&self.j, &self.h, self.offset, s)
    }
}

fn coefficient() -> impl Strategy<Value = f64> {
    prop_oneof![2 => Just(0.0), 3 => -2.0f64..2.0, 1 => (-3i32..=3).prop_map(f64::from)]
}

pub fn dense_model(max_n: usize, with_field: bool) -> impl Strategy<Value = Dense> {
    (1..=max_n).prop_flat_map(move |n| {
        let j = proptest::collection::vec(proptest::collection::vec(coefficient(), n), n);
        let h = proptest::collection::vec(if with_field { coefficient().boxed() } else { Just(0.0).boxed() }, n);
        (j, h, -5.0f64..5.0).prop_map(|(j, h, offset)| Dense { j, h, offset })
    })
}

pub fn dense_qubo(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, f64)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(coefficient(), n),
            proptest::collection::vec(proptest::collection::vec(coefficient(), n), n),
            -5.0f64..5.0,
        )
    })
}

pub fn build_qubo(lin: &[f64], quad: &[Vec<f64>], offset: f64) -> QuboModel {
    let n = lin.len();
    let mut q = QuboModel::new(n).with_offset(offset);
    for a in 0..n {
        q.add_linear(a, lin[a]).unwrap();
        for b in a + 1..n {
            if quad[a][b] != 0.0 {
                q.add_quadratic(a, b, quad[a][b]).unwrap();
            }
        }
    }
    q
}

pub fn naive_qubo(lin: &[f64], quad: &[Vec<f64>], offset: f64, x: &[u8]) -> f64 {
    let n = x.len();
    let mut v = offset;
    for a in 0..n {
        v += lin[a] * x[a] as f64;
        for b in a + 1..n {
            v += quad[a][b] * (x[a] * x[b]) as f64;
        }
    }
    v
}
