//! The heteroclinic profile `omega(x) = tanh(x / sqrt 2)` and its derivatives.
//!
//! Complements `1 -+ omega` and the derivatives are evaluated from
//! `q = exp(-sqrt2 |x|)` so the tails keep full relative precision; only
//! `omega` itself saturates to exactly `+-1` beyond [`SATURATION`].

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::math::jet::Jet;

/// Beyond this `|x|` the profile returns exactly `+-1`.
pub const SATURATION: f64 = 40.0;

#[inline]
pub fn omega(x: f64) -> f64 {
    if x > SATURATION {
        1.0
    } else if x < -SATURATION {
        -1.0
    } else {
        (x / SQRT_2).tanh()
    }
}

/// `1 - omega(x)`, accurate for large positive `x`.
#[inline]
pub fn one_minus_omega(x: f64) -> f64 {
    if x > 0.0 {
        let q = (-SQRT_2 * x).exp();
        2.0 * q / (1.0 + q)
    } else {
        2.0 / (1.0 + (SQRT_2 * x).exp())
    }
}

/// `1 + omega(x)`, accurate for large negative `x`.
#[inline]
pub fn one_plus_omega(x: f64) -> f64 {
    one_minus_omega(-x)
}

/// `1 - omega(x)^2 = sqrt2 * omega'(x)`.
#[inline]
pub fn one_minus_omega_sq(x: f64) -> f64 {
    let q = (-SQRT_2 * x.abs()).exp();
    4.0 * q / ((1.0 + q) * (1.0 + q))
}

#[inline]
pub fn d1(x: f64) -> f64 {
    one_minus_omega_sq(x) / SQRT_2
}

#[inline]
pub fn d2(x: f64) -> f64 {
    -SQRT_2 * omega(x) * d1(x)
}

#[inline]
pub fn d3(x: f64) -> f64 {
    let (w, w1) = (omega(x), d1(x));
    -SQRT_2 * (w1 * w1 + w * (-SQRT_2 * w * w1))
}

#[inline]
pub fn d4(x: f64) -> f64 {
    let j = jet(x);
    j.d(4)
}

/// `omega` and its first four derivatives at `x`.
pub fn jet(x: f64) -> Jet {
    let w = omega(x);
    let w1 = d1(x);
    let w2 = -SQRT_2 * w * w1;
    let w3 = -SQRT_2 * (w1 * w1 + w * w2);
    let w4 = -SQRT_2 * (3.0 * w1 * w2 + w * w3);
    Jet::new([w, w1, w2, w3, w4])
}

/// Jet of `omega'`, including the fifth derivative of `omega`.
pub fn d1_jet(x: f64) -> Jet {
    let j = jet(x);
    let [w, w1, w2, w3, w4] = j.0;
    let w5 = -SQRT_2 * (3.0 * w2 * w2 + 4.0 * w1 * w3 + w * w4);
    Jet::new([w1, w2, w3, w4, w5])
}

/// Jet of `1 - omega` with an accurate value in the right tail.
pub fn one_minus_jet(x: f64) -> Jet {
    let j = jet(x);
    Jet::new([one_minus_omega(x), -j.d(1), -j.d(2), -j.d(3), -j.d(4)])
}

/// Jet of `1 + omega` with an accurate value in the left tail.
pub fn one_plus_jet(x: f64) -> Jet {
    let j = jet(x);
    Jet::new([one_plus_omega(x), j.d(1), j.d(2), j.d(3), j.d(4)])
}

/// `omega` or one of its first three derivatives.
pub fn eval(x: f64, order: u8) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("profile argument {x} is not finite")));
    }
    match order {
        0 => Ok(omega(x)),
        1 => Ok(d1(x)),
        2 => Ok(d2(x)),
        3 => Ok(d3(x)),
        _ => Err(Error::Domain(format!("profile derivative order {order} > 3"))),
    }
}

/// Which tail of the profile an expansion refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Remainder of the two-term tail expansion
/// `omega(x) = 1 - 2 e^{-sqrt2 x} + 2 e^{-2 sqrt2 x} + O(e^{-3 sqrt2 x})`
/// (mirrored for the minus side). Requires `|x| > 1`.
pub fn tail_error(x: f64, side: Side) -> Result<f64> {
    if x.abs() <= 1.0 {
        return Err(Error::Domain(format!("tail expansion needs |x| > 1, got {x}")));
    }
    let y = match side {
        Side::Plus => x,
        Side::Minus => -x,
    };
    let q = (-SQRT_2 * y).exp();
    // omega(y) - 1 = -(1 - omega(y))
    Ok((-one_minus_omega(y) + 2.0 * q - 2.0 * q * q).abs())
}
