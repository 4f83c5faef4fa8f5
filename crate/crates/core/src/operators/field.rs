//! Uniform grids and the nonlinear operator `F` with its linearisation.

use crate::error::{Error, Result};
use crate::math::potential;

/// Spacing above which the second-order stencils are refused.
pub const MAX_DX: f64 = 0.25;

/// Uniform grid `x_i = x0 + i dx`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(Error::Domain(format!("grid spacing {dx} must be positive")));
        }
        if n < 5 {
            return Err(Error::Domain(format!("grid needs at least 5 points, got {n}")));
        }
        Ok(Grid { x0, dx, n })
    }

    /// `n` points evenly covering `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) || n < 5 {
            return Err(Error::Domain(format!("invalid symmetric grid: L = {half_width}, n = {n}")));
        }
        Self::new(-half_width, 2.0 * half_width / (n - 1) as f64, n)
    }

    /// Grid with spacing exactly `dx` covering at least `[-half_width, half_width]`.
    pub fn with_spacing(half_width: f64, dx: f64) -> Result<Self> {
        let m = (half_width / dx).ceil() as usize;
        Self::new(-(m as f64) * dx, dx, 2 * m + 1)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }

    pub fn check_resolution(&self) -> Result<()> {
        if self.dx > MAX_DX {
            Err(Error::GridTooCoarse { dx: self.dx, max: MAX_DX })
        } else {
            Ok(())
        }
    }
}

/// Treatment of the two end points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Ghost values mirrored about the end nodes (homogeneous Neumann).
    #[default]
    EvenReflection,
    /// Second-order one-sided stencils at the end nodes.
    OneSided,
}

/// Second difference with the chosen end treatment.
pub fn dxx(u: &[f64], dx: f64, boundary: Boundary) -> Vec<f64> {
    let n = u.len();
    let h2 = dx * dx;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
    }
    match boundary {
        Boundary::EvenReflection => {
            out[0] = 2.0 * (u[1] - u[0]) / h2;
            out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) / h2;
        }
        Boundary::OneSided => {
            out[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
            out[n - 1] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / h2;
        }
    }
    out
}

fn check(u: &[f64], grid: &Grid) -> Result<()> {
    grid.check_resolution()?;
    if u.len() != grid.n {
        return Err(Error::Domain(format!("{} samples on a grid of {} points", u.len(), grid.n)));
    }
    Ok(())
}

/// `w = u_xx - W'(u)`.
pub fn chemical_potential(u: &[f64], grid: &Grid, boundary: Boundary) -> Result<Vec<f64>> {
    check(u, grid)?;
    let mut w = dxx(u, grid.dx, boundary);
    for (wi, &ui) in w.iter_mut().zip(u) {
        *wi -= potential::w1(ui);
    }
    Ok(w)
}

/// `F(u) = -w_xx + W''(u) w` with `w = u_xx - W'(u)`.
pub fn f_of(u: &[f64], grid: &Grid, boundary: Boundary) -> Result<Vec<f64>> {
    let w = chemical_potential(u, grid, boundary)?;
    let wxx = dxx(&w, grid.dx, boundary);
    Ok(u.iter().zip(&w).zip(&wxx).map(|((&ui, &wi), &wxxi)| -wxxi + potential::w2(ui) * wi).collect())
}

/// `F'(u)[v] = -a_xx + W''(u) a + W'''(u) w v` with `a = v_xx - W''(u) v`.
pub fn f_prime(u: &[f64], v: &[f64], grid: &Grid, boundary: Boundary) -> Result<Vec<f64>> {
    check(v, grid)?;
    let w = chemical_potential(u, grid, boundary)?;
    let mut a = dxx(v, grid.dx, boundary);
    for ((ai, &ui), &vi) in a.iter_mut().zip(u).zip(v) {
        *ai -= potential::w2(ui) * vi;
    }
    let axx = dxx(&a, grid.dx, boundary);
    Ok((0..u.len())
        .map(|i| -axx[i] + potential::w2(u[i]) * a[i] + potential::w3(u[i]) * w[i] * v[i])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::profile;
    use proptest::prelude::*;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn stable_states_are_exact_zeros() {
        let g = Grid::symmetric(10.0, 101).unwrap();
        for c in [1.0, -1.0] {
            for b in [Boundary::EvenReflection, Boundary::OneSided] {
                assert!(f_of(&vec![c; 101], &g, b).unwrap().iter().all(|&f| f == 0.0));
            }
        }
    }

    #[test]
    fn profile_residual_is_second_order() {
        let res = |dx: f64| {
            let g = Grid::with_spacing(20.0, dx).unwrap();
            max_abs(&f_of(&g.sample(profile::omega), &g, Boundary::EvenReflection).unwrap())
        };
        let (a, b, c) = (res(0.1), res(0.05), res(0.025));
        assert!(a < 1e-2);
        for r in [a / b, b / c] {
            assert!((3.8..4.2).contains(&r), "{a:e} {b:e} {c:e}");
        }
    }

    #[test]
    fn coarse_grids_are_refused() {
        let g = Grid::new(0.0, 0.3, 20).unwrap();
        assert!(matches!(f_of(&[0.0; 20], &g, Boundary::EvenReflection), Err(Error::GridTooCoarse { .. })));
        assert!(Grid::new(0.0, 0.1, 4).is_err());
    }

    #[test]
    fn linearisation_at_the_stable_state() {
        let exact = |x: f64| {
            let e = (-x * x).exp();
            let d2 = (4.0 * x * x - 2.0) * e;
            let d4 = (16.0 * x.powi(4) - 48.0 * x * x + 12.0) * e;
            -d4 + 4.0 * d2 - 4.0 * e
        };
        let err = |dx: f64| {
            let g = Grid::with_spacing(12.0, dx).unwrap();
            let f = f_prime(&vec![1.0; g.n], &g.sample(|x| (-x * x).exp()), &g, Boundary::EvenReflection).unwrap();
            (0..g.n).map(|i| (f[i] - exact(g.x(i))).abs()).fold(0.0, f64::max)
        };
        let (a, b) = (err(0.04), err(0.02));
        assert!(b < 1e-2 && (3.8..4.2).contains(&(a / b)), "{a:e} {b:e}");
    }

    #[test]
    fn perturbed_profile() {
        let g = Grid::with_spacing(15.0, 0.05).unwrap();
        let u = g.sample(profile::omega);
        let v = g.sample(f64::sin);
        let f0 = f_of(&u, &g, Boundary::OneSided).unwrap();
        let lin = f_prime(&u, &v, &g, Boundary::OneSided).unwrap();
        let remainder = |eps: f64| {
            let up: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
            let f1 = f_of(&up, &g, Boundary::OneSided).unwrap();
            (0..g.n).map(|i| (f1[i] - f0[i] - eps * lin[i]).abs()).fold(0.0, f64::max)
        };
        let (a, b) = (remainder(1e-4), remainder(2e-4));
        assert!(a < 1e-5 && (3.8..4.2).contains(&(b / a)), "{a:e} {b:e}");
    }

    #[test]
    fn translation_mode_vanishes_under_refinement() {
        let res = |dx: f64| {
            let g = Grid::with_spacing(20.0, dx).unwrap();
            max_abs(&f_prime(&g.sample(profile::omega), &g.sample(profile::d1), &g, Boundary::EvenReflection).unwrap())
        };
        let (a, b) = (res(0.1), res(0.05));
        assert!(b < a / 3.5 && b < 1e-2, "{a:e} {b:e}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn derivative_matches_differences(
            amp in 0.3f64..1.2, width in 0.5f64..2.0, shift in -3.0f64..3.0,
            k in 0.2f64..2.0, phase in 0.0f64..6.0, decay in 0.05f64..0.5,
        ) {
            // roundoff in the difference quotient grows like eps_mach / (eps dx^4)
            let g = Grid::with_spacing(12.0, 0.2).unwrap();
            let u = g.sample(|x| amp * ((x - shift) / width).tanh());
            let v = g.sample(|x| (k * x + phase).sin() * (-decay * x * x).exp());
            let eps = 1e-5;
            let shifted = |s: f64| -> Vec<f64> { u.iter().zip(&v).map(|(a, b)| a + s * b).collect() };
            let fp = f_of(&shifted(eps), &g, Boundary::EvenReflection).unwrap();
            let fm = f_of(&shifted(-eps), &g, Boundary::EvenReflection).unwrap();
            let lin = f_prime(&u, &v, &g, Boundary::EvenReflection).unwrap();
            let scale = max_abs(&lin).max(1.0);
            for i in 0..g.n {
                let fd = (fp[i] - fm[i]) / (2.0 * eps);
                prop_assert!((fd - lin[i]).abs() <= 1e-6 * scale);
            }
        }
    }
}
