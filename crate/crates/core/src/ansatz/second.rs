//! Projected interaction terms `I~_i`, coefficients `d_i` and the second
//! correctors `xi~_i`, all in the frame `y = x - gamma_i` of interface `i`.
//!
//! `xi~ = omega' A` with `A(y) = int_0^y B / omega'^2` and
//! `B(s) = int_{-inf}^s I~ omega'` (equivalently `-int_s^inf`), evaluated
//! from a cache of Gauss–Legendre panels on `[-Y, Y]`.

use std::f64::consts::SQRT_2;

use super::first::FirstCorrector;
use super::params::AnsatzParams;
use crate::error::{Error, Result};
use crate::math::jet::Jet;
use crate::math::profile;
use crate::math::quadrature::{gauss_legendre_10, Domain, Quadrature};
use crate::par::{self, Exec};

/// `int (omega')^2`.
pub const OMEGA_PRIME_NORM: f64 = 2.0 * SQRT_2 / 3.0;

const PANEL_WIDTH: f64 = 0.25;
const MIN_HALF_WIDTH: f64 = 30.0;
/// Relative size of `int I~ omega'` tolerated before the cache is rejected.
const ORTHOGONALITY_TOL: f64 = 1e-8;

/// The interaction terms around one interface.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// `xi_i` in the local frame (between `0` and `eta_{i+1}`).
    right: Option<FirstCorrector>,
    /// `xi_{i-1}` in the local frame (between `-eta_i` and `0`).
    left: Option<FirstCorrector>,
    d: f64,
}

impl Projection {
    /// Interface `i` (1-based) of `params`.
    pub fn new(params: &AnsatzParams, i: usize) -> Result<Self> {
        let k = params.k();
        if i == 0 || i > k {
            return Err(Error::Domain(format!("interface index {i} outside 1..={k}")));
        }
        let gap = |j: usize| {
            let e = params.eta(j);
            if e > 0.0 {
                Ok(e)
            } else {
                Err(Error::GapCollapse { index: j, gap: e, t: params.t })
            }
        };
        let right = if i < k { Some(FirstCorrector::new(0.0, gap(i + 1)?)?) } else { None };
        let left = if i > 1 { Some(FirstCorrector::new(-gap(i)?, 0.0)?) } else { None };
        let mut p = Projection { right, left, d: 0.0 };
        p.d = p.projection_integral()? / OMEGA_PRIME_NORM;
        Ok(p)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Finite breakpoints of the integrands: the neighbouring interfaces and 0.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(3);
        if let Some(l) = &self.left {
            pts.push(l.left);
        }
        pts.push(0.0);
        if let Some(r) = &self.right {
            pts.push(r.right);
        }
        pts
    }

    fn projection_integral(&self) -> Result<f64> {
        let q = Quadrature::new(1e-15, 1e-13);
        Ok(q.integrate_pieces(|y| self.i_hat(y) * profile::d1(y), &self.breakpoints(), true)?.value)
    }

    /// `(I^_{1,i}, I^_{2,i})` at `gamma_i + y`.
    pub fn i_hat_parts(&self, y: f64) -> (f64, f64) {
        let wp = profile::d1(y);
        let one = self.right.map_or(0.0, |xi| {
            let om = profile::one_minus_omega(y);
            3.0 * om * om * profile::one_plus_omega(y - xi.right) - 3.0 * SQRT_2 * wp * xi.value(y)
        });
        let two = self.left.map_or(0.0, |xi| {
            let op = profile::one_plus_omega(y);
            -3.0 * op * op * profile::one_minus_omega(y - xi.left) + 3.0 * SQRT_2 * wp * xi.value(y)
        });
        (one, two)
    }

    pub fn i_hat(&self, y: f64) -> f64 {
        let (a, b) = self.i_hat_parts(y);
        a + b
    }

    pub fn i_hat_jet(&self, y: f64) -> Jet {
        let wp = profile::d1_jet(y);
        let mut s = Jet::default();
        if let Some(xi) = &self.right {
            let om = profile::one_minus_jet(y);
            s = s + (om * om * profile::one_plus_jet(y - xi.right)).scale(3.0) - (wp * xi.jet(y)).scale(3.0 * SQRT_2);
        }
        if let Some(xi) = &self.left {
            let op = profile::one_plus_jet(y);
            s = s - (op * op * profile::one_minus_jet(y - xi.left)).scale(3.0) + (wp * xi.jet(y)).scale(3.0 * SQRT_2);
        }
        s
    }

    /// `I~_i(y)`, orthogonal to `omega'`.
    pub fn i_tilde(&self, y: f64) -> f64 {
        self.i_hat(y) - self.d * profile::d1(y)
    }

    pub fn i_tilde_jet(&self, y: f64) -> Jet {
        self.i_hat_jet(y) - profile::d1_jet(y).scale(self.d)
    }
}

fn gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre_10();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * x.iter().zip(&w).map(|(&xi, &wi)| wi * f(c + h * xi)).sum::<f64>()
}

/// The second corrector `xi~_i` of one interface.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondCorrector {
    proj: Projection,
    half_width: f64,
    /// `B` at the left edge of each panel (the right-hand representation
    /// for panels in `y >= 0`).
    b_start: Vec<f64>,
    /// `A` at every panel edge.
    a_edge: Vec<f64>,
    b_left_end: f64,
    b_right_end: f64,
    mismatch: f64,
}

impl SecondCorrector {
    pub fn new(proj: Projection, exec: Exec) -> Result<Self> {
        let reach = proj.breakpoints().iter().fold(0.0f64, |m, p| m.max(p.abs()));
        let half_width = (reach + 20.0).max(MIN_HALF_WIDTH);
        let n = 2 * (half_width / PANEL_WIDTH).ceil() as usize;
        let half_width = n as f64 * PANEL_WIDTH / 2.0;
        let mid = n / 2;
        let edge = |m: usize| -half_width + m as f64 * PANEL_WIDTH;
        let g = |y: f64| proj.i_tilde(y) * profile::d1(y);

        let panels: Vec<f64> = par::map_range(exec, n, |m| gl(g, edge(m), edge(m + 1)));
        let q = Quadrature::new(1e-300, 1e-13);
        let tail_l = q.integrate(g, Domain::Below(-half_width))?.value;
        let tail_r = q.integrate(g, Domain::Above(half_width))?.value;

        let mut b_start = vec![0.0; n];
        let mut acc = tail_l;
        for m in 0..mid {
            b_start[m] = acc;
            acc += panels[m];
        }
        let b_zero_left = acc;
        let mut acc = -tail_r;
        for m in (mid..n).rev() {
            acc -= panels[m];
            b_start[m] = acc;
        }
        let b_zero_right = acc;
        let mismatch = b_zero_left - b_zero_right;
        let scale: f64 = panels.iter().map(|p| p.abs()).sum::<f64>() + tail_l.abs() + tail_r.abs();
        if mismatch.abs() > ORTHOGONALITY_TOL * scale {
            return Err(Error::InnerIntegralUnstable { mismatch, scale });
        }

        let b_at = |m: usize, s: f64| b_start[m] + gl(g, edge(m), s);
        let h = |m: usize, s: f64| {
            let wp = profile::d1(s);
            b_at(m, s) / (wp * wp)
        };
        let k_panels: Vec<f64> = par::map_range(exec, n, |m| gl(|s| h(m, s), edge(m), edge(m + 1)));
        let mut a_edge = vec![0.0; n + 1];
        for m in mid..n {
            a_edge[m + 1] = a_edge[m] + k_panels[m];
        }
        for m in (0..mid).rev() {
            a_edge[m] = a_edge[m + 1] - k_panels[m];
        }
        Ok(SecondCorrector { proj, half_width, b_start, a_edge, b_left_end: tail_l, b_right_end: -tail_r, mismatch })
    }

    pub fn build(params: &AnsatzParams, i: usize, exec: Exec) -> Result<Self> {
        Self::new(Projection::new(params, i)?, exec)
    }

    pub fn projection(&self) -> &Projection {
        &self.proj
    }

    pub fn d(&self) -> f64 {
        self.proj.d
    }

    /// `int I~ omega'` as seen by the cache.
    pub fn orthogonality_mismatch(&self) -> f64 {
        self.mismatch
    }

    /// `(A(y), B(y))`.
    pub fn inner(&self, y: f64) -> (f64, f64) {
        let hw = self.half_width;
        let n = self.b_start.len();
        if y > hw || y < -hw {
            let (edge, b_end, a_end) =
                if y > hw { (hw, self.b_right_end, self.a_edge[n]) } else { (-hw, self.b_left_end, self.a_edge[0]) };
            let (we, wy) = (profile::d1(edge), profile::d1(y));
            let slope = b_end / (we * we);
            return (a_end + (y - edge) * slope, slope * wy * wy);
        }
        let m = (((y + hw) / PANEL_WIDTH).floor() as usize).min(n - 1);
        let e = -hw + m as f64 * PANEL_WIDTH;
        let g = |s: f64| self.proj.i_tilde(s) * profile::d1(s);
        let b = |s: f64| self.b_start[m] + gl(g, e, s);
        let a = self.a_edge[m]
            + gl(
                |s| {
                    let wp = profile::d1(s);
                    b(s) / (wp * wp)
                },
                e,
                y,
            );
        (a, b(y))
    }

    pub fn value(&self, y: f64) -> f64 {
        profile::d1(y) * self.inner(y).0
    }

    pub fn d1(&self, y: f64) -> f64 {
        let (a, b) = self.inner(y);
        profile::d2(y) * a + b / profile::d1(y)
    }

    /// Jet of `xi~`, with derivatives beyond the first taken from
    /// `xi~'' = W''(omega) xi~ + I~`.
    pub fn jet(&self, y: f64) -> Jet {
        let (a, b) = self.inner(y);
        let wj = profile::jet(y);
        let f0 = wj.d(1) * a;
        let f1 = wj.d(2) * a + b / wj.d(1);
        let p = (wj * wj).scale(3.0) - Jet::constant(1.0);
        Jet::solve_second_order(p, self.proj.i_tilde_jet(y), f0, f1)
    }
}
