//! Finite-difference weights on uniform grids.

use crate::error::{Error, Result};

/// Fornberg's recursion: weights for derivatives `0..=m` at `x0` on `nodes`.
/// Returns `w[d][j]`, the weight of `f(nodes[j])` in the `d`-th derivative.
pub fn fornberg(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// A stencil: integer offsets and weights, already scaled by `dx^-order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub offsets: Vec<i64>,
    pub weights: Vec<f64>,
}

impl Stencil {
    fn build(order: usize, offsets: Vec<i64>, dx: f64) -> Self {
        let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
        let w = fornberg(0.0, &nodes, order);
        let s = dx.powi(-(order as i32));
        Stencil { offsets, weights: w[order].iter().map(|v| v * s).collect() }
    }

    /// Apply at index `i` of `f`; the caller guarantees the offsets are in range.
    pub fn apply(&self, f: &[f64], i: usize) -> f64 {
        self.offsets
            .iter()
            .zip(&self.weights)
            .map(|(&o, &w)| w * f[(i as i64 + o) as usize])
            .sum()
    }
}

/// Second-order accurate stencils for derivatives of order 1 to 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencils {
    pub dx: f64,
}

impl Stencils {
    pub fn new(dx: f64) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::Domain(format!("grid spacing {dx} must be positive")));
        }
        Ok(Stencils { dx })
    }

    fn check(order: usize) -> Result<()> {
        if (1..=4).contains(&order) {
            Ok(())
        } else {
            Err(Error::Domain(format!("stencil order {order} not in 1..=4")))
        }
    }

    pub fn central(&self, order: usize) -> Result<Stencil> {
        Self::check(order)?;
        let r = ((order + 1) / 2) as i64;
        Ok(Stencil::build(order, (-r..=r).collect(), self.dx))
    }

    /// One-sided stencil starting at the evaluation point and reaching
    /// forward (`forward = true`) or backward.
    pub fn one_sided(&self, order: usize, forward: bool) -> Result<Stencil> {
        Self::check(order)?;
        let n = (order + 2) as i64;
        let offsets = (0..n).map(|j| if forward { j } else { -j }).collect();
        Ok(Stencil::build(order, offsets, self.dx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[f64], x: f64, d: usize) -> f64 {
        c.iter()
            .enumerate()
            .skip(d)
            .map(|(i, &ci)| {
                let fall: f64 = (0..d).map(|m| (i - m) as f64).product();
                ci * fall * x.powi((i - d) as i32)
            })
            .sum()
    }

    #[test]
    fn classic_weights() {
        let s = Stencils::new(1.0).unwrap();
        assert_eq!(s.central(2).unwrap().weights, vec![1.0, -2.0, 1.0]);
        assert_eq!(s.central(4).unwrap().weights, vec![1.0, -4.0, 6.0, -4.0, 1.0]);
        let d1 = s.central(1).unwrap().weights;
        assert!((d1[0] + 0.5).abs() < 1e-15 && d1[1].abs() < 1e-15 && (d1[2] - 0.5).abs() < 1e-15);
        assert!(s.central(5).is_err());
        assert!(Stencils::new(0.0).is_err());
    }

    proptest! {
        #[test]
        fn exact_on_low_degree_polynomials(
            c in proptest::collection::vec(-2.0f64..2.0, 6),
            x0 in -1.0f64..1.0,
            dx in 0.05f64..0.3,
        ) {
            let s = Stencils::new(dx).unwrap();
            for order in 1..=4usize {
                let deg = order + 1;
                let cs = &c[..=deg];
                for st in [s.central(order).unwrap(), s.one_sided(order, true).unwrap(), s.one_sided(order, false).unwrap()] {
                    let got: f64 = st.offsets.iter().zip(&st.weights)
                        .map(|(&o, &w)| w * poly(cs, x0 + o as f64 * dx, 0)).sum();
                    let want = poly(cs, x0, order);
                    let scale = 1.0 + dx.powi(-(order as i32));
                    prop_assert!((got - want).abs() <= 1e-11 * scale, "order {} got {} want {}", order, got, want);
                }
            }
        }
    }
}
