//! The kernel `Q(tau, y) = (1/2 pi) int exp(-tau (xi^4 + 4 xi^2)) e^{i xi y} d xi`
//! of `u_t = -u_yyyy + 4 u_yy`, and single-time Duhamel convolutions with it.
//!
//! The integral is taken along `Im xi = c`, with `c` chosen to minimise the
//! peak of the integrand, so the exponentially small values far from the
//! origin are not lost to cancellation.

use num_complex::Complex64;

use super::field::Grid;
use crate::error::{Error, Result};
use crate::math::quadrature::Quadrature;
use crate::par::{self, Exec};

/// `ln(1e-18)`: integrand magnitudes below this, relative to the peak, are dropped.
const TRUNCATION: f64 = 41.45;

/// `ln(1e-300)`: kernels bounded by less than this are returned as zero.
const UNDERFLOW: f64 = -690.8;

fn symbol(xi: Complex64) -> Complex64 {
    let x2 = xi * xi;
    x2 * x2 + 4.0 * x2
}

/// `max_s -Re p(s + ic)`.
fn peak(c: f64) -> f64 {
    let c2 = c * c;
    if 6.0 * c2 <= 4.0 {
        4.0 * c2 - c2 * c2
    } else {
        8.0 * c2 * c2 - 8.0 * c2 + 4.0
    }
}

/// Log of the largest integrand magnitude on the line `Im xi = c`.
fn log_peak(tau: f64, y: f64, c: f64) -> f64 {
    -c * y + tau * peak(c)
}

fn contour_height(tau: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let (mut a, mut b) = (0.0, (y / tau).cbrt() + 2.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let (c1, c2) = (b - g * (b - a), a + g * (b - a));
        if log_peak(tau, y, c1) < log_peak(tau, y, c2) {
            b = c2;
        } else {
            a = c1;
        }
        if b - a < 1e-12 * (1.0 + b) {
            break;
        }
    }
    0.5 * (a + b)
}

/// `Q(tau, y)`.
pub fn heat_kernel(tau: f64, y: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("heat kernel needs tau > 0 and finite y, got ({tau}, {y})")));
    }
    let y = y.abs();
    let c = contour_height(tau, y);
    let top = log_peak(tau, y, c);
    if top < UNDERFLOW {
        return Ok(0.0);
    }
    // Re p(s + ic) = q^2 + b q + c0 with q = s^2
    let (c2, bq) = (c * c, 4.0 - 6.0 * c * c);
    let c0 = c2 * c2 - 4.0 * c2;
    let floor = -peak(c) + TRUNCATION / tau;
    let q_max = 0.5 * (-bq + (bq * bq - 4.0 * (c0 - floor)).max(0.0).sqrt());
    let s_max = q_max.max(0.0).sqrt().max(1e-3);
    // scaled by e^{-top} so the quadrature never works near underflow
    let f = |s: f64| {
        let xi = Complex64::new(s, c);
        (-tau * symbol(xi) + Complex64::i() * xi * y - top).exp().re
    };
    // phase speed of the integrand bounds the number of oscillations
    let speed = y + tau * (12.0 * s_max * s_max * c + 8.0 * c + 4.0 * c * c2);
    let pieces = ((speed * s_max / std::f64::consts::PI).ceil() as usize).clamp(1, 4096) + 1;
    let pts: Vec<f64> = (0..=pieces).map(|m| s_max * m as f64 / pieces as f64).collect();
    let q = Quadrature::new(1e-15 * s_max, 1e-12);
    let v = q.integrate_pieces(f, &pts, false)?;
    Ok(v.value * top.exp() / std::f64::consts::PI)
}

/// `C` fitted to `|Q(tau, y)| <= C tau^{-1/4} exp(-tau^{-1/4} |y|)` over
/// `samples` points of `0 <= y <= reach tau^{1/4}`.
pub fn decay_constant(tau: f64, reach: f64, samples: usize) -> Result<f64> {
    let s = tau.powf(0.25);
    let ys: Vec<f64> = (0..=samples).map(|m| reach * s * m as f64 / samples as f64).collect();
    let c = par::try_map(Exec::Parallel, &ys, |&y| Ok::<f64, Error>(heat_kernel(tau, y)?.abs() * s * (y / s).exp()))?;
    Ok(c.into_iter().fold(0.0, f64::max))
}

/// `e^{-4 tau} Q(tau, .)` on grid offsets `0..n`.
pub fn damped_kernel_table(tau: f64, dx: f64, n: usize, exec: Exec) -> Result<Vec<f64>> {
    let damping = (-4.0 * tau).exp();
    let q = par::try_map(exec, &(0..n).collect::<Vec<_>>(), |&m| heat_kernel(tau, m as f64 * dx))?;
    Ok(q.into_iter().map(|v| damping * v).collect())
}

/// `u(x) = int e^{-4 tau} Q(tau, x - y) g(y) dy` by the trapezoidal rule on `grid`.
pub fn duhamel_step(g: &[f64], tau: f64, grid: &Grid, exec: Exec) -> Result<Vec<f64>> {
    grid.check_resolution()?;
    if g.len() != grid.n {
        return Err(Error::Domain(format!("{} samples on a grid of {} points", g.len(), grid.n)));
    }
    let k = damped_kernel_table(tau, grid.dx, grid.n, exec)?;
    Ok(par::map_range(exec, grid.n, |i| {
        grid.dx * g.iter().enumerate().map(|(j, &gj)| k[i.abs_diff(j)] * gj).sum::<f64>()
    }))
}

/// `Q` by plain quadrature on the real axis, for comparison; absolute
/// accuracy only.
pub fn heat_kernel_real_axis(tau: f64, y: f64) -> Result<f64> {
    let s_max = (TRUNCATION / tau).powf(0.25);
    let pieces = ((y.abs() * s_max / std::f64::consts::PI).ceil() as usize).max(1) + 1;
    let pts: Vec<f64> = (0..=pieces).map(|m| s_max * m as f64 / pieces as f64).collect();
    let q = Quadrature::new(1e-16, 1e-12);
    let v = q.integrate_pieces(|s| (-tau * (s.powi(4) + 4.0 * s * s)).exp() * (s * y).cos(), &pts, false)?;
    Ok(v.value / std::f64::consts::PI)
}
