use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::toda::{explicit_solution, InterfaceVector};

pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Time, interface positions and weight exponents defining one ansatz.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams {
    pub t: f64,
    pub gamma: InterfaceVector,
    pub sigma: f64,
    pub alpha: f64,
}

impl AnsatzParams {
    pub fn new(t: f64, gamma: InterfaceVector, sigma: f64, alpha: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("time {t} must be positive")));
        }
        if !(sigma > 0.0 && sigma < SQRT_2) {
            return Err(Error::Domain(format!("sigma = {sigma} must lie in (0, sqrt 2)")));
        }
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha = {alpha} must exceed 1")));
        }
        Ok(AnsatzParams { t, gamma, sigma, alpha })
    }

    /// Positions `gamma^0(t)` with the default `(sigma, alpha) = (1, 2)`.
    pub fn explicit(k: usize, t: f64) -> Result<Self> {
        Self::new(t, explicit_solution(k, t)?, DEFAULT_SIGMA, DEFAULT_ALPHA)
    }

    pub fn with_weights(mut self, sigma: f64, alpha: f64) -> Result<Self> {
        self.sigma = sigma;
        self.alpha = alpha;
        Self::new(self.t, self.gamma, sigma, alpha)
    }

    pub fn k(&self) -> usize {
        self.gamma.k()
    }

    /// `eta_j` for `j = 1..=k+1`, with `eta_1 = eta_{k+1} = +inf`.
    pub fn eta(&self, j: usize) -> f64 {
        if j <= 1 || j > self.k() {
            f64::INFINITY
        } else {
            self.gamma.at(j) - self.gamma.at(j - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let g = InterfaceVector::new(vec![-1.0, 1.0]).unwrap();
        assert!(AnsatzParams::new(10.0, g.clone(), 1.0, 2.0).is_ok());
        assert!(AnsatzParams::new(10.0, g.clone(), 1.5, 2.0).is_err());
        assert!(AnsatzParams::new(10.0, g.clone(), 1.0, 1.0).is_err());
        assert!(AnsatzParams::new(0.0, g, 1.0, 2.0).is_err());
        let p = AnsatzParams::explicit(3, 100.0).unwrap();
        assert_eq!(p.eta(1), f64::INFINITY);
        assert_eq!(p.eta(4), f64::INFINITY);
        assert!(p.eta(2) > 0.0);
    }
}
