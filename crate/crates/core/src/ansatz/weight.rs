//! The weight `Phi(t, x)` and the weighted sup norm of the ansatz error.

use std::f64::consts::SQRT_2;

use super::assemble::{ErrorField, InterfaceCurve};
use super::params::AnsatzParams;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::toda::InterfaceVector;

/// Distance covered beyond the outermost interfaces by the norm grid.
pub const NORM_MARGIN: f64 = 15.0;
/// Largest admissible spacing of the norm grid.
pub const NORM_SPACING: f64 = 0.05;

/// `Phi` built on reference positions `gamma^0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    gamma0: Vec<f64>,
    scale: f64,
    alpha: f64,
}

impl Weight {
    pub fn new(t: f64, gamma0: &InterfaceVector, sigma: f64, alpha: f64) -> Self {
        Weight { gamma0: gamma0.gamma().to_vec(), scale: Self::time_factor(t, sigma), alpha }
    }

    pub fn from_params(p: &AnsatzParams) -> Self {
        Self::new(p.t, &p.gamma, p.sigma, p.alpha)
    }

    /// `t^{-3/4 - sigma/(8 sqrt 2)}`.
    pub fn time_factor(t: f64, sigma: f64) -> f64 {
        t.powf(-0.75 - sigma / (8.0 * SQRT_2))
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Region `j` (1-based) containing `x`, bounded by the neighbouring midpoints.
    pub fn region(&self, x: f64) -> usize {
        let g = &self.gamma0;
        1 + (1..g.len()).filter(|&j| x >= 0.5 * (g[j - 1] + g[j])).count()
    }

    fn tail(&self, x: f64, j: usize) -> f64 {
        // j is 1-based; positions 0 and k+1 sit at infinity
        if j == 0 || j > self.gamma0.len() {
            0.0
        } else {
            ((x - self.gamma0[j - 1]).abs() + 1.0).powf(-self.alpha)
        }
    }

    /// The formula of region `j` evaluated at `x`, wherever `x` lies.
    pub fn eval_in_region(&self, j: usize, x: f64) -> f64 {
        if self.gamma0.len() == 1 {
            return self.scale * self.tail(x, 1);
        }
        self.scale * (self.tail(x, j - 1) + self.tail(x, j + 1))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_in_region(self.region(x), x)
    }
}

/// Discrete `sup |E| / Phi` with its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub t: f64,
    pub value: f64,
    pub argmax: f64,
    pub lo: f64,
    pub hi: f64,
    pub dx: f64,
    pub points: usize,
}

/// Uniform grid over `[gamma_1 - margin, gamma_k + margin]` with spacing at most `dx`.
pub fn norm_grid(gamma: &InterfaceVector, margin: f64, dx: f64) -> Result<Vec<f64>> {
    if !(dx > 0.0 && dx <= NORM_SPACING && margin >= 0.0) {
        return Err(Error::Domain(format!("norm grid spacing {dx} must lie in (0, {NORM_SPACING}]")));
    }
    let g = gamma.gamma();
    let (lo, hi) = (g[0] - margin, g[g.len() - 1] + margin);
    let n = ((hi - lo) / dx).ceil().max(1.0) as usize;
    Ok((0..=n).map(|m| lo + (hi - lo) * m as f64 / n as f64).collect())
}

pub fn weighted_norm_on(field: &ErrorField, weight: &Weight, grid: &[f64], exec: Exec) -> NormReport {
    let ratios = par::map(exec, grid, |&x| (field.eval(x) / weight.eval(x)).abs());
    let (m, value) = ratios.iter().enumerate().fold((0, 0.0f64), |acc, (m, &r)| if r > acc.1 { (m, r) } else { acc });
    let dx = if grid.len() > 1 { grid[1] - grid[0] } else { 0.0 };
    NormReport {
        t: field.ansatz().params().t,
        value,
        argmax: grid[m],
        lo: grid[0],
        hi: grid[grid.len() - 1],
        dx,
        points: grid.len(),
    }
}

/// `sup |E(t, .)| / Phi(t, .)` for interfaces following `curve`, with `Phi`
/// built on `curve.gamma(t)`.
pub fn weighted_error_norm<C: InterfaceCurve + ?Sized>(
    curve: &C,
    t: f64,
    sigma: f64,
    alpha: f64,
    exec: Exec,
) -> Result<NormReport> {
    let field = ErrorField::new(curve, t, sigma, alpha, exec)?;
    let p = field.ansatz().params();
    let weight = Weight::from_params(p);
    let grid = norm_grid(&p.gamma, NORM_MARGIN, NORM_SPACING)?;
    Ok(weighted_norm_on(&field, &weight, &grid, exec))
}

/// Rows `x, z, z1, E, Phi, E/Phi` on `grid`.
pub fn error_table(field: &ErrorField, weight: &Weight, grid: &[f64], exec: Exec) -> Vec<[f64; 6]> {
    let a = field.ansatz();
    par::map(exec, grid, |&x| {
        let (e, phi) = (field.eval(x), weight.eval(x));
        [x, a.z(x), a.z1(x), e, phi, e / phi]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::assemble::{Explicit, Fixed};

    #[test]
    fn value_at_an_interface() {
        let p = AnsatzParams::explicit(3, 1e3).unwrap();
        let w = Weight::from_params(&p);
        let s = 1e3f64.powf(-0.75 - 1.0 / (8.0 * SQRT_2));
        let (e2, e3) = (p.eta(2), p.eta(3));
        let expect = s * ((e2 + 1.0).powi(-2) + (e3 + 1.0).powi(-2));
        assert!((w.eval(p.gamma.at(2)) - expect).abs() <= 1e-15 * expect);
        let expect1 = s * (e2 + 1.0).powi(-2);
        assert!((w.eval(p.gamma.at(1)) - expect1).abs() <= 1e-15 * expect1);
    }

    #[test]
    fn continuous_at_midpoints_for_two_interfaces() {
        let p = AnsatzParams::explicit(2, 1e3).unwrap();
        let w = Weight::from_params(&p);
        let m = 0.5 * (p.gamma.at(1) + p.gamma.at(2));
        let (l, r) = (w.eval_in_region(1, m), w.eval_in_region(2, m));
        assert!((l - r).abs() <= 1e-15 * l);
        assert_eq!(w.region(m - 1e-9), 1);
        assert_eq!(w.region(m), 2);
    }

    #[test]
    fn jump_at_midpoints_equals_the_far_tail() {
        let p = AnsatzParams::explicit(3, 1e3).unwrap();
        let w = Weight::from_params(&p);
        let g = p.gamma.gamma();
        let m = 0.5 * (g[0] + g[1]);
        let jump = w.eval_in_region(2, m) - w.eval_in_region(1, m);
        let far = w.scale() * ((m - g[2]).abs() + 1.0).powi(-2);
        assert!((jump - far).abs() <= 1e-14 * far);
    }

    #[test]
    fn positive_and_bounded_below_on_the_cluster() {
        // for two interfaces the cluster [m_1, m_{k-1}] is the midpoint
        for &t in &[1e2, 1e4, 1e7] {
            let p = AnsatzParams::explicit(2, t).unwrap();
            let w = Weight::from_params(&p);
            let m = 0.5 * (p.gamma.at(1) + p.gamma.at(2));
            let exact = w.scale() * (0.5 * p.eta(2) + 1.0).powi(-2);
            assert!((w.eval(m) - exact).abs() <= 1e-15 * exact);
            let asymptotic = w.scale() * (t.ln() / (2.0 * SQRT_2)).powi(-2);
            assert_eq!(w.eval(m) > asymptotic, t > 1.4e6, "t={t}");
        }
        let w = Weight::from_params(&AnsatzParams::explicit(4, 50.0).unwrap());
        assert!((0..400).all(|m| w.eval(-100.0 + 0.5 * m as f64) > 0.0));
    }

    #[test]
    fn grid_covers_the_cluster() {
        let g = InterfaceVector::new(vec![-3.0, 4.0]).unwrap();
        let x = norm_grid(&g, 15.0, 0.05).unwrap();
        assert_eq!(x[0], -18.0);
        assert_eq!(*x.last().unwrap(), 19.0);
        assert!(x.windows(2).all(|w| w[1] - w[0] <= 0.05 + 1e-12));
        assert!(norm_grid(&g, 15.0, 0.1).is_err());
    }

    #[test]
    fn stationary_profile_has_zero_norm() {
        let c = Fixed(InterfaceVector::new(vec![0.0]).unwrap());
        let r = weighted_error_norm(&c, 100.0, 1.0, 2.0, Exec::Parallel).unwrap();
        assert!(r.value <= 1e-9, "{}", r.value);
        assert!(r.value.is_finite());
    }

    #[test]
    fn norm_is_finite_and_located_on_the_grid() {
        for k in 2..=3 {
            for &t in &[1e2, 1e4] {
                let r = weighted_error_norm(&Explicit { k }, t, 1.0, 2.0, Exec::Parallel).unwrap();
                assert!(r.value.is_finite() && r.value > 0.0);
                assert!(r.dx <= NORM_SPACING && r.lo <= r.argmax && r.argmax <= r.hi);
            }
        }
    }
}
