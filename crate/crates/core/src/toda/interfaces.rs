use crate::error::{Error, Result};

/// Ordered interface positions `gamma_1 < ... < gamma_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceVector {
    gamma: Vec<f64>,
}

impl InterfaceVector {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Domain("interface vector must hold at least one position".into()));
        }
        if let Some(i) = gamma.iter().position(|g| !g.is_finite()) {
            return Err(Error::Domain(format!("interface position {i} is not finite")));
        }
        check_ordered(&gamma)?;
        Ok(InterfaceVector { gamma })
    }

    pub fn k(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// 1-based access, matching `gamma_j`.
    pub fn at(&self, j: usize) -> f64 {
        self.gamma[j - 1]
    }

    /// `eta_j = gamma_j - gamma_{j-1}` for `j = 2..=k`.
    pub fn gaps(&self) -> Vec<f64> {
        self.gamma.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn min_gap(&self) -> f64 {
        self.gaps().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let k = self.k();
        (0..k).all(|j| (self.gamma[j] + self.gamma[k - 1 - j]).abs() <= tol)
    }

    /// Reflect through the origin: `gamma_j -> -gamma_{k+1-j}`.
    pub fn mirrored(&self) -> Self {
        InterfaceVector { gamma: self.gamma.iter().rev().map(|g| -g).collect() }
    }

    pub fn shifted(&self, c: f64) -> Self {
        InterfaceVector { gamma: self.gamma.iter().map(|g| g + c).collect() }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.gamma
    }
}

/// `OrderingViolated` with the 1-based index `j` of the first gap `eta_j <= 0`.
pub fn check_ordered(gamma: &[f64]) -> Result<()> {
    for (i, w) in gamma.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if !(gap > 0.0) {
            return Err(Error::OrderingViolated { index: i + 2, gap });
        }
    }
    Ok(())
}
