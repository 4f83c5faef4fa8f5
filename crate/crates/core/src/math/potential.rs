//! The quartic double well `W(s) = (1 - s^2)^2 / 4`.

use crate::error::{Error, Result};

#[inline]
pub fn w(s: f64) -> f64 {
    let a = 1.0 - s * s;
    0.25 * a * a
}

#[inline]
pub fn w1(s: f64) -> f64 {
    s * s * s - s
}

#[inline]
pub fn w2(s: f64) -> f64 {
    3.0 * s * s - 1.0
}

#[inline]
pub fn w3(s: f64) -> f64 {
    6.0 * s
}

/// `W` or one of its first three derivatives.
pub fn eval(s: f64, order: u8) -> Result<f64> {
    match order {
        0 => Ok(w(s)),
        1 => Ok(w1(s)),
        2 => Ok(w2(s)),
        3 => Ok(w3(s)),
        _ => Err(Error::Domain(format!("potential derivative order {order} > 3"))),
    }
}
