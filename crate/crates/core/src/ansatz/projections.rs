//! Projections of the interaction terms onto `omega omega'^2`, compared with
//! their leading exponential terms.

use std::f64::consts::SQRT_2;

use super::first::FirstCorrector;
use super::params::AnsatzParams;
use super::second::SecondCorrector;
use crate::error::{Error, Result};
use crate::math::profile;
use crate::math::quadrature::{Domain, Quadrature};

/// A quadrature value and the leading term it should approach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseIntegral {
    pub value: f64,
    pub leading: f64,
}

impl CaseIntegral {
    pub fn relative_error(&self) -> f64 {
        ((self.value - self.leading) / self.leading).abs()
    }
}

/// Which neighbour of interface `i` the term comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbour {
    Left,
    Right,
}

fn quadrature() -> Quadrature {
    Quadrature::new(1e-300, 1e-12)
}

fn kernel(x: f64) -> f64 {
    let wp = profile::d1(x);
    profile::omega(x) * wp * wp
}

fn check_index(p: &AnsatzParams, i: usize, side: Neighbour) -> Result<()> {
    let ok = match side {
        Neighbour::Left => i >= 2 && i <= p.k(),
        Neighbour::Right => i >= 1 && i < p.k(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("interface {i} of {} has no {side:?} neighbour", p.k())))
    }
}

fn leading(eta: f64, c: f64) -> f64 {
    c * (-SQRT_2 * eta).exp()
}

/// `int (omega')^2` by quadrature.
pub fn omega_prime_norm() -> Result<f64> {
    Ok(quadrature().integrate_pieces(|x| profile::d1(x).powi(2), &[0.0], true)?.value)
}

/// Profile tails of the neighbours over `[-eta_i/2, eta_{i+1}/2]`:
/// `g_1 = omega(x + eta_i) - 1` (left) and `g_2 = 1 + omega(x - eta_{i+1})` (right).
pub fn case_one(p: &AnsatzParams, i: usize, side: Neighbour) -> Result<CaseIntegral> {
    check_index(p, i, side)?;
    let (el, er) = (p.eta(i), p.eta(i + 1));
    let q = quadrature();
    let (a, b) = (-0.5 * el, 0.5 * er);
    let domain = match (a.is_finite(), b.is_finite()) {
        (true, true) => Domain::Interval(a, b),
        (false, true) => Domain::Below(b),
        (true, false) => Domain::Above(a),
        (false, false) => Domain::Line(0.0),
    };
    let c = 4.0 * SQRT_2 / 3.0;
    let r = match side {
        Neighbour::Left => CaseIntegral {
            value: q.integrate(|x| -profile::one_minus_omega(x + el) * kernel(x), domain)?.value,
            leading: leading(el, c),
        },
        Neighbour::Right => CaseIntegral {
            value: q.integrate(|x| profile::one_plus_omega(x - er) * kernel(x), domain)?.value,
            leading: leading(er, c),
        },
    };
    Ok(r)
}

/// First correctors seen from interface `i`: `xi_i` (right) or `xi_{i-1}` (left).
pub fn case_two(p: &AnsatzParams, i: usize, side: Neighbour) -> Result<CaseIntegral> {
    check_index(p, i, side)?;
    let c = 2.0 * SQRT_2 / 3.0;
    let (xi, lead) = match side {
        Neighbour::Right => (FirstCorrector::new(0.0, p.eta(i + 1))?, leading(p.eta(i + 1), c)),
        Neighbour::Left => (FirstCorrector::new(-p.eta(i), 0.0)?, -leading(p.eta(i), c)),
    };
    let pts = [xi.left, 0.0, xi.right];
    let pts: Vec<f64> = if xi.left == 0.0 { pts[1..].to_vec() } else { pts[..2].to_vec() };
    let value = quadrature().integrate_pieces(|x| xi.value(x) * kernel(x), &pts, true)?.value;
    Ok(CaseIntegral { value, leading: lead })
}

/// The second corrector of interface `i`.
pub fn case_three(p: &AnsatzParams, sc: &SecondCorrector) -> Result<CaseIntegral> {
    let pts = sc.projection().breakpoints();
    let value = quadrature().integrate_pieces(|x| sc.value(x) * kernel(x), &pts, true)?.value;
    let i = (1..=p.k())
        .find(|&i| {
            let b = sc.projection().breakpoints();
            let (l, r) = (b[0], b[b.len() - 1]);
            (l == 0.0 || l == -p.eta(i)) && (r == 0.0 || r == p.eta(i + 1))
        })
        .unwrap_or(1);
    let c = 2.0 * SQRT_2 / 3.0;
    let lead = |e: f64| if e.is_finite() { leading(e, c) } else { 0.0 };
    Ok(CaseIntegral { value, leading: lead(p.eta(i)) + lead(p.eta(i + 1)) })
}
