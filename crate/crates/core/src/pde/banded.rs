//! Pentadiagonal matrices and their LU factorisation without pivoting.

use crate::error::{Error, Result};

/// Square matrix with two bands on either side of the diagonal. Row `i`
/// stores columns `i-2 ..= i+2` at positions `0 ..= 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pentadiagonal {
    rows: Vec<[f64; 5]>,
}

impl Pentadiagonal {
    pub fn zeros(n: usize) -> Self {
        Pentadiagonal { rows: vec![[0.0; 5]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for r in &mut m.rows {
            r[2] = 1.0;
        }
        m
    }

    /// Tridiagonal second difference with mirrored ghost points.
    pub fn second_difference(n: usize, dx: f64) -> Self {
        let s = 1.0 / (dx * dx);
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i][1] = s;
            m.rows[i][2] = -2.0 * s;
            m.rows[i][3] = s;
        }
        m.rows[0] = [0.0, 0.0, -2.0 * s, 2.0 * s, 0.0];
        m.rows[n - 1] = [0.0, 2.0 * s, -2.0 * s, 0.0, 0.0];
        m
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let d = j as isize - i as isize;
        if d.abs() > 2 || j >= self.n() {
            0.0
        } else {
            self.rows[i][(d + 2) as usize]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let d = j as isize - i as isize;
        self.rows[i][(d + 2) as usize] = v;
    }

    /// `a self + b other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let rows = self.rows.iter().zip(&other.rows).map(|(x, y)| std::array::from_fn(|c| a * x[c] + b * y[c])).collect();
        Pentadiagonal { rows }
    }

    /// Product of two tridiagonal matrices.
    pub fn square_of_tridiagonal(t: &Self) -> Self {
        let n = t.n();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                let lo = i.max(j).saturating_sub(1);
                let hi = (i.min(j) + 1).min(n - 1);
                let v: f64 = (lo..=hi).map(|l| t.get(i, l) * t.get(l, j)).sum();
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(2);
                (lo..(i + 3).min(n)).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn factor(&self) -> Result<BandedLu> {
        let n = self.n();
        let mut u = self.rows.clone();
        let mut l = vec![[0.0f64; 2]; n];
        for k in 0..n {
            let pivot = u[k][2];
            if !(pivot.abs() > f64::MIN_POSITIVE) || !pivot.is_finite() {
                return Err(Error::LinearSolveFailure { row: k });
            }
            for i in k + 1..(k + 3).min(n) {
                let off = i - k;
                let f = u[i][2 - off] / pivot;
                l[i][2 - off] = f;
                u[i][2 - off] = 0.0;
                for j in k + 1..(k + 3).min(n) {
                    u[i][2 + j - i] -= f * u[k][2 + j - k];
                }
            }
        }
        Ok(BandedLu { l, u })
    }
}

/// `L U` factors of a pentadiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedLu {
    /// Multipliers for columns `i-2, i-1` of row `i`.
    l: Vec<[f64; 2]>,
    u: Vec<[f64; 5]>,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n {
            let mut s = b[i];
            if i >= 1 {
                s -= self.l[i][1] * b[i - 1];
            }
            if i >= 2 {
                s -= self.l[i][0] * b[i - 2];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.u[i][3] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.u[i][4] * b[i + 2];
            }
            b[i] = s / self.u[i][2];
        }
    }
}
