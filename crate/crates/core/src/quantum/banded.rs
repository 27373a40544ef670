//! Banded LU with partial pivoting for the stationary-state equations.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Square matrix with `lower` sub-diagonals and `upper` super-diagonals.
///
/// Row `i` stores columns `i − lower ..= i + upper + lower`; the extra `lower`
/// columns absorb fill-in from row swaps.
pub(crate) struct BandedMatrix {
    size: usize,
    lower: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl BandedMatrix {
    pub fn new(size: usize, lower: usize, upper: usize) -> Self {
        let width = 2 * lower + upper + 1;
        BandedMatrix { size, lower, width, data: vec![Complex64::new(0.0, 0.0); size * width] }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.lower >= i && j + self.lower - i < self.width, "({i}, {j}) outside band");
        i * self.width + (j + self.lower - i)
    }

    pub fn add(&mut self, i: usize, j: usize, value: Complex64) {
        let k = self.slot(i, j);
        self.data[k] += value;
    }

    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[self.slot(i, j)]
    }

    fn last_col(&self, i: usize) -> usize {
        (i + self.width - self.lower - 1).min(self.size - 1)
    }

    /// Solves `A x = b` in place, consuming the matrix.
    pub fn solve(mut self, mut rhs: Vec<Complex64>) -> Result<Vec<Complex64>> {
        let n = self.size;
        for c in 0..n {
            let last_row = (c + self.lower).min(n - 1);
            let mut pivot = c;
            let mut best = self.get(c, c).norm_sqr();
            for r in c + 1..=last_row {
                let mag = self.get(r, c).norm_sqr();
                if mag > best {
                    best = mag;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Err(invalid("singular stationary-state system"));
            }
            let end = self.last_col(c);
            if pivot != c {
                for j in c..=end {
                    let (a, b) = (self.slot(c, j), self.slot(pivot, j));
                    self.data.swap(a, b);
                }
                rhs.swap(c, pivot);
            }
            let diag = self.get(c, c);
            for r in c + 1..=last_row {
                let factor = self.get(r, c) / diag;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in c..=end {
                    let v = self.get(c, j);
                    let k = self.slot(r, j);
                    self.data[k] -= factor * v;
                }
                let top = rhs[c];
                rhs[r] -= factor * top;
            }
        }
        let mut x = rhs;
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..=self.last_col(i) {
                acc -= self.get(i, j) * x[j];
            }
            x[i] = acc / self.get(i, i);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn solves_pivoting_tridiagonal() {
        // [[0, 1, 0], [2, 1, 1], [0, 3, 4]] x = [1, 4, 7] has x = [1, 1, 1].
        let mut a = BandedMatrix::new(3, 1, 1);
        a.add(0, 1, c(1.0));
        a.add(1, 0, c(2.0));
        a.add(1, 1, c(1.0));
        a.add(1, 2, c(1.0));
        a.add(2, 1, c(3.0));
        a.add(2, 2, c(4.0));
        let x = a.solve(vec![c(1.0), c(4.0), c(7.0)]).unwrap();
        for v in x {
            assert!((v - c(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn detects_singularity() {
        let a = BandedMatrix::new(2, 1, 1);
        assert!(a.solve(vec![c(1.0), c(1.0)]).is_err());
    }
}
