//! The explicit solution `gamma^0(t)` of the CH Toda system.

use std::f64::consts::SQRT_2;

use super::interfaces::InterfaceVector;
use super::system::{ch_bracket_scale, ch_forcing, CH_COEFFICIENT};
use crate::error::{Error, Result};

/// `1152 = 3 * 384`.
pub const TIME_SCALE: f64 = 1152.0;

/// `x_i = (i-1)(k-i+1)/2`, 1-based, zero outside `2..=k`.
pub fn x0(k: usize, i: i64) -> f64 {
    if i < 2 || i > k as i64 {
        return 0.0;
    }
    ((i - 1) * (k as i64 - i + 1)) as f64 / 2.0
}

/// Constants `a_1..a_k`, antisymmetric with `a_{(k+1)/2} = 0` for odd `k`.
///
/// Fixed by `a_i - a_{i-1} = -ln(x_i)/sqrt2` (so that consecutive
/// differences reproduce the explicit gaps) together with `sum a_i = 0`.
pub fn constants(k: usize) -> Vec<f64> {
    let mut a = vec![0.0; k];
    let c = 1.0 / (2.0 * SQRT_2);
    for i in 1..=k / 2 {
        let s: f64 = ((i + 1)..=(k - i + 1))
            .map(|l| (((l - 1) * (k - l + 1)) as f64 / 2.0).ln())
            .sum();
        a[k - i] = -c * s;
        a[i - 1] = c * s;
    }
    a
}

fn slope(k: usize, i: usize) -> f64 {
    (i as f64 - (k as f64 + 1.0) / 2.0) / (2.0 * SQRT_2)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("explicit solution needs k >= 2, got {k}")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time {t} must be positive")));
    }
    Ok(())
}

/// Gaps `eta^0_i(t)`, `i = 2..=k`.
pub fn explicit_gap_solution(k: usize, t: f64) -> Result<Vec<f64>> {
    check_k(k)?;
    check_t(t)?;
    let l = (TIME_SCALE * t).ln() / (2.0 * SQRT_2);
    let gaps: Vec<f64> = (2..=k).map(|i| l - x0(k, i as i64).ln() / SQRT_2).collect();
    if let Some(p) = gaps.iter().position(|&g| !(g > 0.0)) {
        return Err(Error::GapCollapse { index: p + 2, gap: gaps[p], t });
    }
    Ok(gaps)
}

/// `gamma^0(t)`; the positions sum to zero.
pub fn explicit_solution(k: usize, t: f64) -> Result<InterfaceVector> {
    explicit_gap_solution(k, t)?;
    let a = constants(k);
    let l = (TIME_SCALE * t).ln();
    InterfaceVector::new((1..=k).map(|i| slope(k, i) * l + a[i - 1]).collect())
}

/// `d gamma^0 / dt`.
pub fn explicit_velocity(k: usize, t: f64) -> Result<Vec<f64>> {
    check_k(k)?;
    check_t(t)?;
    Ok((1..=k).map(|i| slope(k, i) / t).collect())
}

/// Smallest admissible time: every gap of `gamma^0(t)` is at least `min_gap`.
pub fn admissible_time(k: usize, min_gap: f64) -> Result<f64> {
    check_k(k)?;
    let xmax = (2..=k).map(|i| x0(k, i as i64)).fold(0.0, f64::max);
    // (1/(2 sqrt2)) ln(1152 t) - ln(xmax)/sqrt2 >= min_gap
    Ok(((2.0 * SQRT_2 * min_gap) + 2.0 * xmax.ln()).exp() / TIME_SCALE)
}

/// Relative residual of the CH Toda system along `gamma^0`, with the
/// interaction coefficient exposed for mutation tests.
pub fn toda_residual_with(k: usize, t: f64, coefficient: f64) -> Result<f64> {
    let g = explicit_solution(k, t)?;
    let v = explicit_velocity(k, t)?;
    let g = g.gamma();
    let mut worst = 0.0f64;
    for j in 0..k {
        let lhs = 2.0 * SQRT_2 / 3.0 * v[j];
        let rhs = ch_forcing(g, coefficient, j);
        let scale = coefficient * ch_bracket_scale(g, j);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

/// `max_i |(2 sqrt2/3) gamma^0_i' - R_i(gamma^0)|`, relative to the size of
/// the terms in `R_i`.
pub fn toda_residual(k: usize, t: f64) -> Result<f64> {
    toda_residual_with(k, t, CH_COEFFICIENT)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_interfaces_at_unit_time() {
        let a = constants(2);
        let ln2 = std::f64::consts::LN_2;
        // Solving the k = 2 system by hand: (2 sqrt2/3) eta' = 2 * 384 * 2 e^{-2 sqrt2 eta}
        // gives eta = ln(4608 t) / (2 sqrt2), hence gamma_2 = eta / 2.
        let eta = (4608.0f64).ln() / (2.0 * SQRT_2);
        assert!((a[0] + ln2 / (2.0 * SQRT_2)).abs() < 1e-15);
        assert!((a[1] - ln2 / (2.0 * SQRT_2)).abs() < 1e-15);
        let g = explicit_solution(2, 1.0).unwrap();
        let want = 1152f64.ln() / (4.0 * SQRT_2) + ln2 / (2.0 * SQRT_2);
        assert!((want - eta / 2.0).abs() < 1e-14);
        assert!((g.at(2) - want).abs() < 1e-14);
    }

    #[test]
    fn centred_and_symmetric() {
        for k in 2..=10 {
            for &t in &[10.0, 1e3, 1e6] {
                let g = explicit_solution(k, t).unwrap();
                let sum: f64 = g.gamma().iter().sum();
                assert!(sum.abs() < 1e-12, "k={k} t={t} sum={sum}");
                assert!(g.is_symmetric(1e-12));
            }
        }
        assert_eq!(explicit_solution(3, 77.0).unwrap().at(2), 0.0);
    }

    #[test]
    fn x0_values() {
        assert_eq!([x0(4, 2), x0(4, 3), x0(4, 4)], [1.5, 2.0, 1.5]);
        assert_eq!(x0(2, 2), 0.5);
        assert_eq!(x0(4, 1), 0.0);
        assert_eq!(x0(4, 5), 0.0);
    }

    #[test]
    fn gaps_are_differences() {
        for k in 2..=10 {
            let g = explicit_solution(k, 250.0).unwrap();
            let e = explicit_gap_solution(k, 250.0).unwrap();
            for (a, b) in g.gaps().iter().zip(&e) {
                assert!((a - b).abs() < 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn small_time_collapses() {
        let err = explicit_gap_solution(4, 1e-3).unwrap_err();
        assert!(matches!(err, Error::GapCollapse { .. }));
        let t = admissible_time(4, 4.0).unwrap();
        let min = explicit_gap_solution(4, t).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        assert!((min - 4.0).abs() < 1e-12);
    }

    #[test]
    fn residual_vanishes() {
        for k in 2..=10 {
            for &t in &[10.0, 1e2, 1e4] {
                let r = toda_residual(k, t).unwrap();
                assert!(r <= 1e-12, "k={k} t={t} r={r}");
            }
        }
        let r = toda_residual_with(2, 10.0, 383.0).unwrap();
        assert!(r > 1e-3);
    }
}
