//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Half-lines are mapped onto `(0, 1)` by `x = a + s / (1 - s)`; the whole
//! line is split at a caller-chosen centre.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Nodes and weights of the 10-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_10() -> ([f64; 10], [f64; 10]) {
    let mut x = [0.0; 10];
    let mut w = [0.0; 10];
    for j in 0..5 {
        let node = XGK[2 * j + 1];
        x[j] = -node;
        x[9 - j] = node;
        w[j] = WG[j];
        w[9 - j] = WG[j];
    }
    (x, w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval(f64, f64),
    /// `[a, +inf)`
    Above(f64),
    /// `(-inf, b]`
    Below(f64),
    /// The whole line, split at the given point.
    Line(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv = [0.0; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        fv[j] = f1;
        fv[20 - j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }
    let value = resk * h;
    let (resabs, resasc) = (resabs * h.abs(), resasc * h.abs());
    let mut error = ((resk - resg) * h).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel { a, b, value, error }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Quadrature { abs_tol, rel_tol, ..Default::default() }
    }

    fn adapt<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<Estimate> {
        let mut heap = BinaryHeap::new();
        let first = kronrod(f, a, b);
        let (mut value, mut error) = (first.value, first.error);
        heap.push(first);
        let mut subdivisions = 0;
        loop {
            if !(value.is_finite() && error.is_finite()) {
                return Err(Error::NonConvergence { estimate: value, error, subdivisions });
            }
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                break;
            }
            if subdivisions >= self.max_subdivisions {
                return Err(Error::NonConvergence { estimate: value, error, subdivisions });
            }
            let worst = heap.pop().expect("heap holds at least one panel");
            let m = 0.5 * (worst.a + worst.b);
            if m <= worst.a || m >= worst.b {
                // Panel cannot be split further in floating point.
                return Err(Error::NonConvergence { estimate: value, error, subdivisions });
            }
            let (l, r) = (kronrod(f, worst.a, m), kronrod(f, m, worst.b));
            value += l.value + r.value - worst.value;
            error += l.error + r.error - worst.error;
            heap.push(l);
            heap.push(r);
            subdivisions += 1;
            if subdivisions % 64 == 0 {
                // Re-sum to stop drift from the running updates.
                value = heap.iter().map(|p| p.value).sum();
                error = heap.iter().map(|p| p.error).sum();
            }
        }
        let value: f64 = heap.iter().map(|p| p.value).sum();
        Ok(Estimate { value, error, subdivisions })
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, domain: Domain) -> Result<Estimate> {
        self.run(&f, domain)
    }

    fn run(&self, f: &dyn Fn(f64) -> f64, domain: Domain) -> Result<Estimate> {
        match domain {
            Domain::Interval(a, b) => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::Domain(format!("interval [{a}, {b}] is not finite")));
                }
                if a == b {
                    return Ok(Estimate { value: 0.0, error: 0.0, subdivisions: 0 });
                }
                self.adapt(&f, a, b)
            }
            Domain::Above(a) => {
                let g = |s: f64| {
                    let r = 1.0 - s;
                    f(a + s / r) / (r * r)
                };
                self.adapt(&g, 0.0, 1.0)
            }
            Domain::Below(b) => {
                let g = |s: f64| {
                    let r = 1.0 - s;
                    f(b - s / r) / (r * r)
                };
                self.adapt(&g, 0.0, 1.0)
            }
            Domain::Line(c) => {
                let half = Quadrature { abs_tol: 0.5 * self.abs_tol, ..*self };
                let lo = half.run(f, Domain::Below(c))?;
                let hi = half.run(f, Domain::Above(c))?;
                Ok(Estimate {
                    value: lo.value + hi.value,
                    error: lo.error + hi.error,
                    subdivisions: lo.subdivisions + hi.subdivisions,
                })
            }
        }
    }

    /// Integrate over consecutive pieces `[p_0, p_1], ..., [p_{n-1}, p_n]`,
    /// optionally closing with half-lines at both ends.
    pub fn integrate_pieces<F: Fn(f64) -> f64>(&self, f: F, points: &[f64], tails: bool) -> Result<Estimate> {
        let f: &dyn Fn(f64) -> f64 = &f;
        let mut total = Estimate { value: 0.0, error: 0.0, subdivisions: 0 };
        let mut add = |e: Estimate| {
            total.value += e.value;
            total.error += e.error;
            total.subdivisions += e.subdivisions;
        };
        let n = points.len().max(1) as f64 + if tails { 2.0 } else { 0.0 };
        let part = Quadrature { abs_tol: self.abs_tol / n, ..*self };
        if tails {
            if let Some(&p0) = points.first() {
                add(part.run(f, Domain::Below(p0))?);
            }
        }
        for w in points.windows(2) {
            add(part.run(f, Domain::Interval(w[0], w[1]))?);
        }
        if tails {
            if let Some(&pn) = points.last() {
                add(part.run(f, Domain::Above(pn))?);
            }
        }
        Ok(total)
    }
}

/// Integrate with the default tolerances.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Domain) -> Result<Estimate> {
    Quadrature::default().integrate(f, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::profile;
    use std::f64::consts::SQRT_2;

    #[test]
    fn profile_integrals() {
        let e = integrate(|x| profile::d1(x).powi(2), Domain::Line(0.0)).unwrap();
        assert!((e.value - 2.0 * SQRT_2 / 3.0).abs() < 1e-10, "{e:?}");
        let e = integrate(profile::d1, Domain::Line(0.0)).unwrap();
        assert!((e.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let e = integrate(|x| x.powi(7) - 3.0 * x * x, Domain::Interval(-1.0, 2.0)).unwrap();
        let want = (256.0 - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((e.value - want).abs() < 1e-12);
    }

    #[test]
    fn half_lines_and_pieces() {
        let e = integrate(|x| (-x).exp(), Domain::Above(0.0)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-11);
        let e = integrate(|x| x.exp(), Domain::Below(1.0)).unwrap();
        assert!((e.value - 1f64.exp()).abs() < 1e-10);
        let q = Quadrature::default();
        let e = q.integrate_pieces(|x| (-x * x).exp(), &[-1.0, 0.0, 2.0], true).unwrap();
        assert!((e.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn reports_nonconvergence() {
        let q = Quadrature { abs_tol: 1e-14, rel_tol: 0.0, max_subdivisions: 5 };
        let err = q.integrate(|x: f64| x.sqrt().recip(), Domain::Interval(0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
        // a pole on a Kronrod node poisons the estimate
        let err = Quadrature::default().integrate(|x: f64| x.abs().sqrt().recip(), Domain::Interval(-1.0, 1.0));
        assert!(matches!(err, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn gauss_legendre_integrates_degree_19() {
        let (x, w) = gauss_legendre_10();
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }
}
