//! Truncated Taylor jets `[f, f', f'', f''', f'''']` in one variable.
//!
//! Products follow the Leibniz rule, so polynomial expressions in jets give
//! exact derivatives up to fourth order.

use std::ops::{Add, Mul, Neg, Sub};

pub const ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet(pub [f64; ORDER + 1]);

const BINOM: [[f64; ORDER + 1]; ORDER + 1] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

impl Jet {
    pub const fn new(d: [f64; ORDER + 1]) -> Self {
        Jet(d)
    }

    pub const fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0, 0.0])
    }

    /// The derivative of order `n`.
    #[inline]
    pub fn d(&self, n: usize) -> f64 {
        self.0[n]
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn scale(self, c: f64) -> Self {
        Jet(self.0.map(|v| v * c))
    }

    /// Jet of `f` from `f(x)`, `f'(x)` and `f'' = p f + r`, with `p` and `r`
    /// given as jets.
    pub fn solve_second_order(p: Jet, r: Jet, f0: f64, f1: f64) -> Self {
        let mut d = [f0, f1, 0.0, 0.0, 0.0];
        for n in 2..=ORDER {
            let m = n - 2;
            let pf: f64 = (0..=m).map(|k| BINOM[m][k] * p.0[k] * d[m - k]).sum();
            d[n] = pf + r.0[m];
        }
        Jet(d)
    }

    /// Shift derivatives down by two: the jet of `f''`, with the two top
    /// entries unknown and set to zero.
    pub fn second_derivative(self) -> Self {
        let d = self.0;
        Jet([d[2], d[3], d[4], 0.0, 0.0])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut r = self.0;
        for (a, b) in r.iter_mut().zip(o.0) {
            *a += b;
        }
        Jet(r)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|v| -v))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (a, b) = (self.0, o.0);
        let mut r = [0.0; ORDER + 1];
        for (n, rn) in r.iter_mut().enumerate() {
            for k in 0..=n {
                *rn += BINOM[n][k] * a[k] * b[n - k];
            }
        }
        Jet(r)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_jet(c: &[f64], x: f64) -> Jet {
        // derivatives of sum c_i x^i evaluated directly
        let mut d = [0.0; 5];
        for (n, dn) in d.iter_mut().enumerate() {
            for (i, &ci) in c.iter().enumerate().skip(n) {
                let fall: f64 = (0..n).map(|m| (i - m) as f64).product();
                *dn += ci * fall * x.powi((i - n) as i32);
            }
        }
        Jet(d)
    }

    #[test]
    fn product_of_polynomials_matches_expanded_polynomial() {
        let p = [1.0, -2.0, 0.5];
        let q = [0.3, 1.0, 0.0, -1.5];
        // p * q expanded
        let mut pq = vec![0.0; p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                pq[i + j] += a * b;
            }
        }
        for &x in &[-1.3, 0.0, 0.7, 2.1] {
            let got = poly_jet(&p, x) * poly_jet(&q, x);
            let want = poly_jet(&pq, x);
            for n in 0..5 {
                assert!((got.d(n) - want.d(n)).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn second_order_solve_reproduces_exponential() {
        // f = e^{2x}: f'' = 4 f
        let j = Jet::solve_second_order(Jet::constant(4.0), Jet::default(), 1.0, 2.0);
        assert_eq!(j.0, [1.0, 2.0, 4.0, 8.0, 16.0]);
        // f = x^3 at x = 1: f'' = 6x = 0 * f + (6x)
        let r = Jet::new([6.0, 6.0, 0.0, 0.0, 0.0]);
        let j = Jet::solve_second_order(Jet::default(), r, 1.0, 3.0);
        assert_eq!(j.0, [1.0, 3.0, 6.0, 6.0, 0.0]);
    }

    #[test]
    fn arithmetic() {
        let a = Jet::new([1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!((a - a).0, [0.0; 5]);
        assert_eq!((a * Jet::constant(2.0)).0, a.scale(2.0).0);
        assert_eq!(a.second_derivative().0, [3.0, 4.0, 5.0, 0.0, 0.0]);
    }
}
