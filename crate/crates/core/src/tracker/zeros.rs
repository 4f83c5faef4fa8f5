//! Sign changes of a sampled field, refined by cubic interpolation.

use crate::error::{Error, Result};
use crate::pde::ScalarField;

/// Zeros of `u`, ascending.
pub fn find_zeros(u: &ScalarField) -> Result<Vec<f64>> {
    let x = u.x();
    let zs = zeros_of_samples(&x, &u.u);
    if zs.is_empty() {
        Err(Error::NoZeros)
    } else {
        Ok(zs)
    }
}

/// Zeros of samples `v` at evenly spaced nodes `x`.
pub fn zeros_of_samples(x: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < n {
        if v[i] == 0.0 {
            // an exact zero counts once, and only if the sign changes across it
            let mut j = i + 1;
            while j < n && v[j] == 0.0 {
                j += 1;
            }
            if i > 0 && j < n && v[i - 1] * v[j] < 0.0 {
                out.push(0.5 * (x[i] + x[j - 1]));
            }
            i = j;
            continue;
        }
        if v[i] * v[i + 1] < 0.0 {
            out.push(refine(x, v, i));
        }
        i += 1;
    }
    out
}

/// Root in `[x_i, x_{i+1}]` of the cubic through four neighbouring samples.
fn refine(x: &[f64], v: &[f64], i: usize) -> f64 {
    let n = v.len();
    let dx = x[i + 1] - x[i];
    if n < 4 {
        return x[i] - v[i] * dx / (v[i + 1] - v[i]);
    }
    // node offsets (in units of dx) relative to x_i
    let start = i.saturating_sub(1).min(n - 4);
    let nodes: [f64; 4] = std::array::from_fn(|m| (start + m) as f64 - i as f64);
    let vals: [f64; 4] = std::array::from_fn(|m| v[start + m]);
    let p = |s: f64| {
        (0..4)
            .map(|a| {
                let l: f64 = (0..4).filter(|&b| b != a).map(|b| (s - nodes[b]) / (nodes[a] - nodes[b])).product();
                vals[a] * l
            })
            .sum::<f64>()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let plo = p(lo).signum();
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if p(mid).signum() == plo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    x[i] + 0.5 * (lo + hi) * dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::profile;
    use crate::pde::Grid1D;

    #[test]
    fn profile_zero() {
        let u = ScalarField::sample(Grid1D::default(), 1.0, |x| profile::omega(x - 0.123)).unwrap();
        let z = find_zeros(&u).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - 0.123).abs() < 1e-6, "{}", z[0] - 0.123);
    }

    #[test]
    fn mirrored_field_gives_mirrored_zeros() {
        let g = Grid1D::default();
        let f = |x: f64| profile::omega(x + 1.7) * profile::omega(x - 2.31) * profile::omega(x - 5.02);
        let a = find_zeros(&ScalarField::sample(g, 1.0, f).unwrap()).unwrap();
        let b = find_zeros(&ScalarField::sample(g, 1.0, |x| f(-x)).unwrap()).unwrap();
        assert_eq!(a.len(), 3);
        for (p, q) in a.iter().zip(b.iter().rev()) {
            assert!((p + q).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_sign_has_no_zeros() {
        let u = ScalarField::sample(Grid1D::default(), 1.0, |_| -1.0).unwrap();
        assert_eq!(find_zeros(&u), Err(Error::NoZeros));
    }

    #[test]
    fn exact_sample_zero_counted_once() {
        let x: Vec<f64> = (0..9).map(|i| i as f64 - 4.0).collect();
        let v: Vec<f64> = x.iter().map(|&t| t * 0.1).collect();
        assert_eq!(zeros_of_samples(&x, &v), vec![0.0]);
        let touch: Vec<f64> = x.iter().map(|&t| t * t).collect();
        assert!(zeros_of_samples(&x, &touch).is_empty());
    }

    #[test]
    fn cubic_beats_linear() {
        let g = Grid1D::default();
        let u = ScalarField::sample(g, 1.0, |x| profile::omega(x - 0.0311)).unwrap();
        let z = find_zeros(&u).unwrap()[0];
        let x = u.x();
        let i = (0..g.n - 1).find(|&i| u.u[i] < 0.0 && u.u[i + 1] > 0.0).unwrap();
        let lin = x[i] - u.u[i] * (x[i + 1] - x[i]) / (u.u[i + 1] - u.u[i]);
        assert!((z - 0.0311).abs() * 50.0 < (lin - 0.0311).abs());
    }
}
