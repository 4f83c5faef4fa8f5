//! The first correctors `xi_i`, solving `(d_xx - 2) xi_i = 6 f^-_i f^+_{i+1}`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::math::jet::Jet;
use crate::math::profile;
use crate::math::special::{softcap_d1, softcap_diff};

/// Closed form of `xi_i` between interfaces at `left < right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstCorrector {
    pub left: f64,
    pub right: f64,
    prefactor: f64,
}

impl FirstCorrector {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        let eta = right - left;
        if !(eta > 0.0) {
            return Err(Error::GapCollapse { index: 0, gap: eta, t: f64::NAN });
        }
        // 6 / (e^{sqrt2 eta} - 1)
        let e = (-SQRT_2 * eta).exp();
        Ok(FirstCorrector { left, right, prefactor: 6.0 * e / -(-SQRT_2 * eta).exp_m1() })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    pub fn value(&self, x: f64) -> f64 {
        let al = SQRT_2 * (x - self.left);
        let ar = SQRT_2 * (x - self.right);
        self.prefactor * (softcap_diff(ar, al) + softcap_diff(-al, -ar))
    }

    pub fn d1(&self, x: f64) -> f64 {
        let al = SQRT_2 * (x - self.left);
        let ar = SQRT_2 * (x - self.right);
        let b = softcap_d1(ar) - softcap_d1(al) - softcap_d1(-al) + softcap_d1(-ar);
        self.prefactor * SQRT_2 * b
    }

    /// `6 f^-_i f^+_{i+1}` as a jet.
    pub fn forcing(&self, x: f64) -> Jet {
        let fm = -profile::one_minus_jet(x - self.left);
        let fp = profile::one_plus_jet(x - self.right);
        (fm * fp).scale(6.0)
    }

    pub fn jet(&self, x: f64) -> Jet {
        Jet::solve_second_order(Jet::constant(2.0), self.forcing(x), self.value(x), self.d1(x))
    }
}
