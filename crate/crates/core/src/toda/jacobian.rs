//! The linearization `H` of the algebraic Toda system and its spectrum.

use nalgebra::DMatrix;

use super::explicit::x0;
use crate::error::{Error, Result};

/// The quadratic form `H_i(x)` as `(coefficient, a, b)` triples meaning
/// `coefficient * x_a * x_b`, indices relative to `i`.
const TERMS: [(f64, i64, i64); 7] = [
    (-2.0, -1, -1),
    (4.0, 0, 0),
    (-2.0, 1, 1),
    (-1.0, 0, 1),
    (1.0, -1, -2),
    (-1.0, -1, 0),
    (1.0, 1, 2),
];

/// `H_i(x)` with `x` given through a 1-based accessor.
pub fn h_form(i: i64, x: impl Fn(i64) -> f64) -> f64 {
    TERMS.iter().map(|&(c, a, b)| c * x(i + a) * x(i + b)).sum()
}

/// `dH_i / dx_m` at `x`.
fn h_partial(i: i64, m: i64, x: impl Fn(i64) -> f64) -> f64 {
    let mut s = 0.0;
    for &(c, a, b) in &TERMS {
        if i + a == m {
            s += c * x(i + b);
        }
        if i + b == m {
            s += c * x(i + a);
        }
    }
    s
}

/// `H_{lj} = (dH_{l+1}/dx_{j+1}) x_{j+1}` at `x^0`, `l, j = 1..k-1`.
pub fn jacobian_h(k: usize) -> Result<DMatrix<f64>> {
    if k < 2 {
        return Err(Error::Domain(format!("Jacobian needs k >= 2, got {k}")));
    }
    let n = k - 1;
    let x = |m: i64| x0(k, m);
    Ok(DMatrix::from_fn(n, n, |l, j| {
        let (row, col) = (l as i64 + 2, j as i64 + 2);
        h_partial(row, col, x) * x(col)
    }))
}

/// Eigenvalues of `H`, ascending. Fails if any has a non-negligible
/// imaginary part.
pub fn jacobian_eigenvalues(k: usize) -> Result<Vec<f64>> {
    let h = jacobian_h(k)?;
    let scale = h.amax().max(1.0);
    let mut ev = Vec::with_capacity(h.nrows());
    for z in h.complex_eigenvalues().iter() {
        if z.im.abs() > 1e-9 * scale {
            return Err(Error::Domain(format!("complex eigenvalue {z} of H for k = {k}")));
        }
        ev.push(z.re);
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `T_m (T_m + 1)` with `T_m = m(m+1)/2`.
pub fn expected_eigenvalue(m: usize) -> f64 {
    let t = (m * (m + 1) / 2) as f64;
    t * (t + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_is_one_at_x0() {
        for k in 2..=10 {
            for i in 2..=k as i64 {
                let h = h_form(i, |m| x0(k, m));
                assert!((h - 1.0).abs() < 1e-12, "k={k} i={i} H={h}");
            }
        }
    }

    #[test]
    fn partials_match_differences() {
        let k = 6;
        let x = |m: i64| x0(k, m);
        let eps = 1e-6;
        for i in 2..=k as i64 {
            for m in 2..=k as i64 {
                let bump = |s: f64| move |n: i64| x(n) + if n == m { s } else { 0.0 };
                let fd = (h_form(i, bump(eps)) - h_form(i, bump(-eps))) / (2.0 * eps);
                assert!((fd - h_partial(i, m, x)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn spectrum() {
        assert_eq!(jacobian_h(2).unwrap()[(0, 0)], 2.0);
        let ev = jacobian_eigenvalues(5).unwrap();
        for (got, want) in ev.iter().zip([2.0, 12.0, 42.0, 110.0]) {
            assert!((got - want).abs() < 1e-8, "{ev:?}");
        }
        for k in 2..=10 {
            let ev = jacobian_eigenvalues(k).unwrap();
            assert_eq!(ev.len(), k - 1);
            for (m, got) in ev.iter().enumerate() {
                let want = expected_eigenvalue(m + 1);
                assert!((got - want).abs() <= 1e-8, "k={k} m={} got {got}", m + 1);
            }
        }
    }
}
