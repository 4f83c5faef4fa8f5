//! Right-hand sides of the interface ODE systems.
//!
//! Neighbours with index outside `1..=k` sit at infinity; their exponential
//! terms are simply left out.

use std::f64::consts::SQRT_2;

use super::interfaces::check_ordered;
use crate::error::Result;

/// Interaction coefficient of the Cahn–Hilliard Toda system.
pub const CH_COEFFICIENT: f64 = 384.0;
/// Interaction coefficient of the Allen–Cahn comparison system.
pub const AC_COEFFICIENT: f64 = 12.0 * SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TodaKind {
    /// Positions `gamma_1..gamma_k`.
    ChFull,
    /// Gaps `eta_2..eta_k`.
    ChGaps,
    /// Allen–Cahn positions `rho_1..rho_k` (ancient solutions, see [`TodaSystem::time_reversed`]).
    AcComparison,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TodaSystem {
    pub kind: TodaKind,
    pub k: usize,
    /// The `384` of the CH system; exposed so tests can perturb it.
    pub ch_coefficient: f64,
}

impl TodaSystem {
    pub fn new(kind: TodaKind, k: usize) -> Self {
        TodaSystem { kind, k, ch_coefficient: CH_COEFFICIENT }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            TodaKind::ChGaps => self.k - 1,
            _ => self.k,
        }
    }

    /// The Allen–Cahn system lives on `t in (-inf, 0]`; it is integrated in
    /// `s = -t`, where its gaps open up like `ln s / sqrt 2`.
    pub fn time_reversed(&self) -> bool {
        self.kind == TodaKind::AcComparison
    }

    /// Velocity in the integration variable (`s = -t` for the AC system).
    pub fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        match self.kind {
            TodaKind::ChFull => {
                check_ordered(state)?;
                ch_velocity(state, self.ch_coefficient, out);
            }
            TodaKind::ChGaps => {
                if let Some(i) = state.iter().position(|&g| !(g > 0.0)) {
                    return Err(crate::Error::OrderingViolated { index: i + 2, gap: state[i] });
                }
                ch_gap_velocity(state, self.ch_coefficient, out);
            }
            TodaKind::AcComparison => {
                check_ordered(state)?;
                ac_velocity(state, out);
                for v in out.iter_mut() {
                    *v = -*v;
                }
            }
        }
        Ok(())
    }
}

/// The bracket `R_j / coefficient` of the CH system, 0-based `j`.
fn ch_bracket(g: &[f64], j: usize) -> f64 {
    let k = g.len();
    let mut s = 0.0;
    if j >= 2 {
        s -= (-SQRT_2 * (g[j] - g[j - 2])).exp();
    }
    if j >= 1 {
        s += 2.0 * (-2.0 * SQRT_2 * (g[j] - g[j - 1])).exp();
    }
    if j + 1 < k {
        s -= 2.0 * (-2.0 * SQRT_2 * (g[j + 1] - g[j])).exp();
    }
    if j + 2 < k {
        s += (-SQRT_2 * (g[j + 2] - g[j])).exp();
    }
    s
}

/// Sum of the absolute values of the bracket terms; the natural scale of `R_j`.
pub(crate) fn ch_bracket_scale(g: &[f64], j: usize) -> f64 {
    let k = g.len();
    let mut s = 0.0;
    if j >= 2 {
        s += (-SQRT_2 * (g[j] - g[j - 2])).exp();
    }
    if j >= 1 {
        s += 2.0 * (-2.0 * SQRT_2 * (g[j] - g[j - 1])).exp();
    }
    if j + 1 < k {
        s += 2.0 * (-2.0 * SQRT_2 * (g[j + 1] - g[j])).exp();
    }
    if j + 2 < k {
        s += (-SQRT_2 * (g[j + 2] - g[j])).exp();
    }
    s
}

/// `R_j(gamma)`, the right-hand side of `(2 sqrt2 / 3) gamma_j' = R_j`.
pub(crate) fn ch_forcing(g: &[f64], coefficient: f64, j: usize) -> f64 {
    coefficient * ch_bracket(g, j)
}

fn ch_velocity(g: &[f64], coefficient: f64, out: &mut [f64]) {
    let c = 3.0 / (2.0 * SQRT_2) * coefficient;
    for (j, o) in out.iter_mut().enumerate() {
        *o = c * ch_bracket(g, j);
    }
}

fn ch_gap_velocity(eta: &[f64], coefficient: f64, out: &mut [f64]) {
    // Rebuild positions up to a translation, which the system ignores.
    let mut g = Vec::with_capacity(eta.len() + 1);
    g.push(0.0);
    for e in eta {
        g.push(g[g.len() - 1] + e);
    }
    let mut v = vec![0.0; g.len()];
    ch_velocity(&g, coefficient, &mut v);
    for (o, w) in out.iter_mut().zip(v.windows(2)) {
        *o = w[1] - w[0];
    }
}

fn ac_velocity(r: &[f64], out: &mut [f64]) {
    let k = r.len();
    for (j, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        if j + 1 < k {
            s += (-SQRT_2 * (r[j + 1] - r[j])).exp();
        }
        if j >= 1 {
            s -= (-SQRT_2 * (r[j] - r[j - 1])).exp();
        }
        *o = AC_COEFFICIENT * s;
    }
}

/// `gamma'` of the Cahn–Hilliard Toda system.
pub fn ch_rhs(gamma: &[f64]) -> Result<Vec<f64>> {
    check_ordered(gamma)?;
    let mut out = vec![0.0; gamma.len()];
    ch_velocity(gamma, CH_COEFFICIENT, &mut out);
    Ok(out)
}

/// `eta'` of the gap form of the Cahn–Hilliard Toda system.
pub fn ch_gap_rhs(eta: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; eta.len()];
    TodaSystem::new(TodaKind::ChGaps, eta.len() + 1).eval(eta, &mut out)?;
    Ok(out)
}

/// `rho'` of the Allen–Cahn comparison system in forward time (`n = 1`).
pub fn ac_rhs(rho: &[f64]) -> Result<Vec<f64>> {
    check_ordered(rho)?;
    let mut out = vec![0.0; rho.len()];
    ac_velocity(rho, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    #[test]
    fn two_interfaces_by_hand() {
        let g = 1.3;
        let v = ch_rhs(&[-g, g]).unwrap();
        let want = 3.0 / (2.0 * SQRT_2) * 384.0 * 2.0 * (-4.0 * SQRT_2 * g).exp();
        assert!((v[0] + want).abs() <= 1e-15 * want);
        assert!((v[1] - want).abs() <= 1e-15 * want);
        assert_eq!(v[0] + v[1], 0.0);

        let r = ac_rhs(&[-g, g]).unwrap();
        let want = 12.0 * SQRT_2 * (-2.0 * SQRT_2 * g).exp();
        assert!((r[1] + want).abs() <= 1e-15 * want);
    }

    #[test]
    fn symmetric_three_has_still_middle() {
        let r = ac_rhs(&[-2.0, 0.0, 2.0]).unwrap();
        assert_eq!(r[1], 0.0);
        let v = ch_rhs(&[-2.0, 0.0, 2.0]).unwrap();
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn ordering_violations() {
        assert!(matches!(ch_rhs(&[0.0, -1.0]), Err(Error::OrderingViolated { index: 2, .. })));
        assert!(matches!(ac_rhs(&[0.0, 0.0]), Err(Error::OrderingViolated { .. })));
        assert!(ch_gap_rhs(&[1.0, -0.1]).is_err());
    }

    #[test]
    fn gap_form_is_difference_of_positions() {
        let g = [-4.0, -1.5, 0.2, 3.1];
        let v = ch_rhs(&g).unwrap();
        let eta: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
        let e = ch_gap_rhs(&eta).unwrap();
        for j in 0..3 {
            assert!((e[j] - (v[j + 1] - v[j])).abs() <= 1e-14 * v.iter().map(|x| x.abs()).sum::<f64>());
        }
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        for i in 1..v.len() {
            if v[i] <= v[i - 1] + 0.5 {
                v[i] = v[i - 1] + 0.5;
            }
        }
        v
    }

    proptest! {
        #[test]
        fn translation_invariant(raw in proptest::collection::vec(-5.0f64..5.0, 2..8), c in -10.0f64..10.0) {
            let g = sorted(raw);
            let shifted: Vec<f64> = g.iter().map(|x| x + c).collect();
            for (f, scale) in [(ch_rhs as fn(&[f64]) -> Result<Vec<f64>>, 1e-9), (ac_rhs, 1e-9)] {
                let a = f(&g).unwrap();
                let b = f(&shifted).unwrap();
                let m = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x - y).abs() <= scale * m + 1e-300);
                }
            }
        }

        #[test]
        fn symmetric_states_conserve_the_sum(raw in proptest::collection::vec(0.3f64..4.0, 1..5), odd in any::<bool>()) {
            let half = sorted(raw);
            let mut g: Vec<f64> = half.iter().rev().map(|x| -x).collect();
            if odd { g.push(0.0); }
            g.extend(half.iter().copied());
            let v = ch_rhs(&g).unwrap();
            let m = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
            prop_assert!(v.iter().sum::<f64>().abs() <= 1e-12 * m + 1e-300);
        }
    }
}
