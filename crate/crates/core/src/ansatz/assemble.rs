//! Assembly of `z = sum s_j omega(x - gamma_j) - sum s_j xi_j - sum s_j xi^_j - c_k`
//! with `s_j = (-1)^(j+1)`, and the error `E = -dz/dt + F(z)`.

use super::first::FirstCorrector;
use super::params::AnsatzParams;
use super::second::{Projection, SecondCorrector};
use crate::error::Result;
use crate::math::jet::Jet;
use crate::math::profile;
use crate::par::{self, Exec};
use crate::toda::{explicit_solution, explicit_velocity, InterfaceVector};

/// Relative time step of the central difference for the corrector terms.
pub const TIME_STEP: f64 = 1e-4;

fn sign(j: usize) -> f64 {
    if j % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// The constant `(1 + (-1)^k) / 2`.
fn offset(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        0.0
    }
}

/// `xi_1..xi_{k-1}` in global coordinates and `xi~_1..xi~_k` in interface frames.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectorSet {
    pub first: Vec<FirstCorrector>,
    pub second: Vec<SecondCorrector>,
}

impl CorrectorSet {
    pub fn build(params: &AnsatzParams, exec: Exec) -> Result<Self> {
        let g = params.gamma.gamma();
        let k = g.len();
        let first = (1..k).map(|i| FirstCorrector::new(g[i - 1], g[i])).collect::<Result<Vec<_>>>()?;
        let second = (1..=k)
            .map(|i| SecondCorrector::new(Projection::new(params, i)?, exec))
            .collect::<Result<Vec<_>>>()?;
        Ok(CorrectorSet { first, second })
    }

    pub fn d(&self) -> Vec<f64> {
        self.second.iter().map(|s| s.d()).collect()
    }
}

/// The corrected approximate solution at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    params: AnsatzParams,
    correctors: CorrectorSet,
}

impl Ansatz {
    pub fn build(params: AnsatzParams, exec: Exec) -> Result<Self> {
        let correctors = CorrectorSet::build(&params, exec)?;
        Ok(Ansatz { params, correctors })
    }

    pub fn params(&self) -> &AnsatzParams {
        &self.params
    }

    pub fn correctors(&self) -> &CorrectorSet {
        &self.correctors
    }

    pub fn k(&self) -> usize {
        self.params.k()
    }

    /// `xi^_i(x) = xi~_i(x - gamma_i)` for 1-based `i`.
    pub fn xi_hat(&self, i: usize, x: f64) -> f64 {
        self.correctors.second[i - 1].value(x - self.params.gamma.at(i))
    }

    /// First-stage ansatz: profiles only.
    pub fn z1(&self, x: f64) -> f64 {
        let g = self.params.gamma.gamma();
        g.iter().enumerate().map(|(j, &gj)| sign(j + 1) * profile::omega(x - gj)).sum::<f64>() - offset(g.len())
    }

    /// Corrector part `-sum s_j xi_j - sum s_j xi^_j`.
    pub fn correction(&self, x: f64) -> f64 {
        let g = self.params.gamma.gamma();
        let a: f64 = self.correctors.first.iter().enumerate().map(|(j, xi)| sign(j + 1) * xi.value(x)).sum();
        let b: f64 =
            self.correctors.second.iter().zip(g).enumerate().map(|(j, (xi, &gj))| sign(j + 1) * xi.value(x - gj)).sum();
        -a - b
    }

    pub fn z(&self, x: f64) -> f64 {
        self.z1(x) + self.correction(x)
    }

    pub fn z_jet(&self, x: f64) -> Jet {
        let g = self.params.gamma.gamma();
        let mut s = Jet::constant(-offset(g.len()));
        for (j, &gj) in g.iter().enumerate() {
            s = s + profile::jet(x - gj).scale(sign(j + 1));
        }
        for (j, xi) in self.correctors.first.iter().enumerate() {
            s = s - xi.jet(x).scale(sign(j + 1));
        }
        for (j, (xi, &gj)) in self.correctors.second.iter().zip(g).enumerate() {
            s = s - xi.jet(x - gj).scale(sign(j + 1));
        }
        s
    }

    /// `F(z) = -(z'' - W'(z))'' + W''(z)(z'' - W'(z))`.
    pub fn f_of_z(&self, x: f64) -> f64 {
        f_from_jet(self.z_jet(x))
    }
}

/// `F(u)` from a jet of `u`.
pub fn f_from_jet(z: Jet) -> f64 {
    let w = z.second_derivative() - (z * z * z - z);
    let zv = z.value();
    -w.d(2) + (3.0 * zv * zv - 1.0) * w.value()
}

/// A differentiable family of interface positions.
pub trait InterfaceCurve: Sync {
    fn gamma(&self, t: f64) -> Result<InterfaceVector>;

    fn velocity(&self, t: f64) -> Result<Vec<f64>> {
        let h = TIME_STEP * t;
        let (p, m) = (self.gamma(t + h)?, self.gamma(t - h)?);
        Ok(p.gamma().iter().zip(m.gamma()).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    }
}

/// The explicit Toda solution `gamma^0(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Explicit {
    pub k: usize,
}

impl InterfaceCurve for Explicit {
    fn gamma(&self, t: f64) -> Result<InterfaceVector> {
        explicit_solution(self.k, t)
    }

    fn velocity(&self, t: f64) -> Result<Vec<f64>> {
        explicit_velocity(self.k, t)
    }
}

/// Interfaces at rest.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixed(pub InterfaceVector);

impl InterfaceCurve for Fixed {
    fn gamma(&self, _t: f64) -> Result<InterfaceVector> {
        Ok(self.0.clone())
    }

    fn velocity(&self, _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.0.k()])
    }
}

/// `E(t, .)` for interfaces following a curve.
#[derive(Debug, Clone)]
pub struct ErrorField {
    center: Ansatz,
    plus: Ansatz,
    minus: Ansatz,
    velocity: Vec<f64>,
    dt: f64,
}

impl ErrorField {
    pub fn new<C: InterfaceCurve + ?Sized>(curve: &C, t: f64, sigma: f64, alpha: f64, exec: Exec) -> Result<Self> {
        let dt = TIME_STEP * t;
        let build = |s: f64| -> Result<Ansatz> {
            Ansatz::build(AnsatzParams::new(s, curve.gamma(s)?, sigma, alpha)?, exec)
        };
        let (center, (plus, minus)) = par::join(exec, || build(t), || par::join(exec, || build(t + dt), || build(t - dt)));
        Ok(ErrorField { center: center?, plus: plus?, minus: minus?, velocity: curve.velocity(t)?, dt })
    }

    pub fn ansatz(&self) -> &Ansatz {
        &self.center
    }

    pub fn dz_dt(&self, x: f64) -> f64 {
        let g = self.center.params.gamma.gamma();
        let moving: f64 =
            g.iter().zip(&self.velocity).enumerate().map(|(j, (&gj, &v))| -sign(j + 1) * v * profile::d1(x - gj)).sum();
        moving + (self.plus.correction(x) - self.minus.correction(x)) / (2.0 * self.dt)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.center.f_of_z(x) - self.dz_dt(x)
    }
}
