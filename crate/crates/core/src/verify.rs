//! Identity checks shared by the acceptance suite and the `verify` command.
//!
//! Every check reduces to one measured number compared against an upper
//! tolerance, plus a table of the raw values it was computed from.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use crate::ansatz::{
    case_one, case_three, case_two, omega_prime_norm, AnsatzParams, FirstCorrector, Neighbour, Projection,
    SecondCorrector,
};
use crate::error::{Error, Result};
use crate::math::quadrature::{Domain, Quadrature};
use crate::math::{potential, profile};
use crate::operators::{decay_constant, heat_kernel, heat_kernel_real_axis, kernel_convergence};
use crate::par::{self, Exec};
use crate::toda::explicit::toda_residual_with;
use crate::toda::jacobian::expected_eigenvalue;
use crate::toda::system::CH_COEFFICIENT;
use crate::toda::{explicit_solution, jacobian_eigenvalues};

/// Times at which the asymptotic expansions are sampled.
pub const TIMES: [f64; 3] = [1e2, 1e3, 1e4];
/// Times of the exact Toda solution check.
pub const TODA_TIMES: [f64; 3] = [10.0, 1e2, 1e4];
/// Diffusion times of the heat-kernel checks.
pub const TAUS: [f64; 3] = [0.1, 1.0, 10.0];
pub const KERNEL_SPACINGS: [f64; 3] = [0.1, 0.05, 0.025];

/// Raw values behind a check, written out as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Evidence {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Evidence {
    fn new(header: &[&str]) -> Self {
        Evidence { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub evidence: Evidence,
}

/// Default tolerances, one per check. A tolerance of `f64::MAX` only
/// requires the measured value to be finite.
pub const DEFAULT_TOLERANCES: [(&str, f64); 21] = [
    ("profile_equation", 1e-7),
    ("profile_tails", 1e-4),
    ("omega_prime_norm", 1e-10),
    ("xi_ode_residual", 1e-8),
    ("xi_midpoint_symmetry", 1e-10),
    ("xi_decay", 2.0),
    ("xi_tilde_ode_residual", 1e-6),
    ("xi_tilde_bound", 3.0),
    ("i_tilde_orthogonality", 1e-9),
    ("d_expansion", 0.2),
    ("d_expansion_monotone", 1.0),
    ("case_one", 0.25),
    ("case_two", 0.25),
    ("case_three", 0.25),
    ("case_integrals_monotone", 1.0),
    ("kernel_convergence", 0.5),
    ("heat_kernel_mass", 1e-8),
    ("heat_kernel_contour", 1e-12),
    ("heat_kernel_decay_fit", f64::MAX),
    ("toda_residual", 1e-10),
    ("jacobian_spectrum", 1e-8),
];

/// Tolerance table with per-check overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<&'static str, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances(DEFAULT_TOLERANCES.iter().copied().collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match self.0.get_mut(name) {
            Some(v) if value > 0.0 => {
                *v = value;
                Ok(())
            }
            Some(_) => Err(Error::Domain(format!("tolerance for {name} must be positive"))),
            None => Err(Error::Domain(format!("unknown check {name}"))),
        }
    }

    /// Every finite tolerance divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Tolerances(self.0.iter().map(|(&k, &v)| (k, if v == f64::MAX { v } else { v / factor })).collect())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.keys().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tolerances: Tolerances,
    /// Interaction coefficient used by the Toda residual check.
    pub ch_coefficient: f64,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerances: Tolerances::default(), ch_coefficient: CH_COEFFICIENT, exec: Exec::default() }
    }
}

pub fn check_names() -> Vec<&'static str> {
    DEFAULT_TOLERANCES.iter().map(|(n, _)| *n).collect()
}

/// Runs every check; checks run concurrently under [`Exec::Parallel`].
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    par::try_map(opts.exec, &check_names(), |name| run_check(name, opts))
}

pub fn run_check(name: &str, opts: &VerifyOptions) -> Result<CheckResult> {
    let tolerance = opts.tolerances.get(name).ok_or_else(|| Error::Domain(format!("unknown check {name}")))?;
    let name = DEFAULT_TOLERANCES.iter().find(|(n, _)| *n == name).map(|(n, _)| *n).expect("known check");
    let (measured, evidence) = match name {
        "profile_equation" => profile_equation(),
        "profile_tails" => profile_tails()?,
        "omega_prime_norm" => {
            let v = omega_prime_norm()?;
            let exact = 2.0 * SQRT_2 / 3.0;
            let mut e = Evidence::new(&["quadrature", "exact"]);
            e.push(vec![v, exact]);
            ((v - exact).abs(), e)
        }
        "xi_ode_residual" => first_corrector_residual(1e3)?,
        "xi_midpoint_symmetry" => first_corrector_symmetry(1e3)?,
        "xi_decay" => first_corrector_decay()?,
        "xi_tilde_ode_residual" => second_corrector_residual(1e3, opts.exec)?,
        "xi_tilde_bound" => second_corrector_decay(opts.exec)?,
        "i_tilde_orthogonality" => orthogonality()?,
        "d_expansion" => {
            let e = d_expansion_table()?;
            (e.rows[1][1], e)
        }
        "d_expansion_monotone" => {
            let e = d_expansion_table()?;
            (worst_ratio(&e, 1), e)
        }
        "case_one" | "case_two" | "case_three" => {
            let e = case_table(opts.exec)?;
            let col = match name {
                "case_one" => 1,
                "case_two" => 2,
                _ => 3,
            };
            (e.rows[1][col], e)
        }
        "case_integrals_monotone" => {
            let e = case_table(opts.exec)?;
            ((1..4).map(|c| worst_ratio(&e, c)).fold(0.0, f64::max), e)
        }
        "kernel_convergence" => {
            let r = kernel_convergence(&KERNEL_SPACINGS)?;
            let mut e = Evidence::new(&["dx", "residual", "ratio"]);
            let mut worst: f64 = 0.0;
            for (m, &(dx, res)) in r.iter().enumerate() {
                let ratio = if m == 0 { f64::NAN } else { r[m - 1].1 / res };
                if m > 0 {
                    worst = worst.max((ratio - 4.0).abs());
                }
                e.push(vec![dx, res, ratio]);
            }
            (worst, e)
        }
        "heat_kernel_mass" => {
            let mut e = Evidence::new(&["tau", "mass"]);
            let mut worst: f64 = 0.0;
            for &tau in &TAUS {
                let m = heat_kernel_mass(tau)?;
                worst = worst.max((m - 1.0).abs());
                e.push(vec![tau, m]);
            }
            (worst, e)
        }
        "heat_kernel_contour" => heat_kernel_contour(opts.exec)?,
        "heat_kernel_decay_fit" => {
            let mut e = Evidence::new(&["tau", "C"]);
            let mut worst: f64 = 0.0;
            for &tau in &TAUS {
                let c = decay_constant(tau, 10.0, 200)?;
                worst = if c.is_finite() { worst.max(c) } else { f64::INFINITY };
                e.push(vec![tau, c]);
            }
            (worst, e)
        }
        "toda_residual" => toda_residual_table(opts.ch_coefficient)?,
        "jacobian_spectrum" => jacobian_spectrum()?,
        _ => unreachable!("every named check is handled"),
    };
    let passed = measured.is_finite() && measured <= tolerance;
    Ok(CheckResult { name, measured, tolerance, passed, evidence })
}

/// Largest ratio of consecutive entries in column `col`.
fn worst_ratio(e: &Evidence, col: usize) -> f64 {
    e.rows.windows(2).map(|w| w[1][col] / w[0][col]).fold(0.0, f64::max)
}

/// Richardson-extrapolated central second difference.
pub fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

fn profile_equation() -> (f64, Evidence) {
    let mut e = Evidence::new(&["x", "residual"]);
    let mut worst: f64 = 0.0;
    for m in 0..=400 {
        let x = -20.0 + 0.1 * m as f64;
        let r = second_difference(profile::omega, x, 1e-3) - potential::w1(profile::omega(x));
        worst = worst.max(r.abs());
        e.push(vec![x, r]);
    }
    (worst, e)
}

/// Remainder of the two-term tail expansion against its exact value `2 q^3 / (1 + q)`.
fn profile_tails() -> Result<(f64, Evidence)> {
    let mut e = Evidence::new(&["x", "remainder", "exact"]);
    let mut worst: f64 = 0.0;
    for m in 0..=60 {
        let x = 1.5 + 0.1 * m as f64;
        let q = (-SQRT_2 * x).exp();
        let exact = 2.0 * q * q * q / (1.0 + q);
        for side in [profile::Side::Plus, profile::Side::Minus] {
            let y = if side == profile::Side::Plus { x } else { -x };
            let r = profile::tail_error(y, side)?;
            worst = worst.max((r / exact - 1.0).abs());
            e.push(vec![y, r, exact]);
        }
    }
    Ok((worst, e))
}

/// `max |xi'' - 2 xi - 6 f^- f^+|` of the k = 2 pair at 100 points.
pub fn first_corrector_residual(t: f64) -> Result<(f64, Evidence)> {
    let g = explicit_solution(2, t)?;
    let xi = FirstCorrector::new(g.at(1), g.at(2))?;
    let mut e = Evidence::new(&["x", "residual"]);
    let mut worst: f64 = 0.0;
    for m in 0..100 {
        let x = g.at(1) - 15.0 + (g.at(2) - g.at(1) + 30.0) * m as f64 / 99.0;
        let r = second_difference(|y| xi.value(y), x, 1e-3) - 2.0 * xi.value(x) - xi.forcing(x).d(0);
        worst = worst.max(r.abs());
        e.push(vec![x, r]);
    }
    Ok((worst, e))
}

/// `max |xi(m + s) - xi(m - s)|` about the midpoint `m` of the pair.
pub fn first_corrector_symmetry(t: f64) -> Result<(f64, Evidence)> {
    let g = explicit_solution(2, t)?;
    let xi = FirstCorrector::new(g.at(1), g.at(2))?;
    let mid = xi.midpoint();
    let mut e = Evidence::new(&["s", "difference"]);
    let mut worst: f64 = 0.0;
    for m in 0..=150 {
        let s = 0.1 * m as f64;
        let d = xi.value(mid + s) - xi.value(mid - s);
        worst = worst.max(d.abs());
        e.push(vec![s, d]);
    }
    Ok((worst, e))
}

/// Spread (max / min over [`TIMES`]) of the constant `C` in
/// `|xi(x)| <= C t^{-1/2} e^{-|x - gamma_1|}` left of the pair.
fn first_corrector_decay() -> Result<(f64, Evidence)> {
    let mut e = Evidence::new(&["t", "C"]);
    for &t in &TIMES {
        let g = explicit_solution(3, t)?;
        let xi = FirstCorrector::new(g.at(1), g.at(2))?;
        let c = (0..200)
            .map(|m| {
                let x = g.at(1) - 0.1 * m as f64;
                xi.value(x).abs() / (t.powf(-0.5) * (-(x - g.at(1)).abs()).exp())
            })
            .fold(0.0, f64::max);
        e.push(vec![t, c]);
    }
    Ok((spread(&e), e))
}

fn spread(e: &Evidence) -> f64 {
    let c: Vec<f64> = e.rows.iter().map(|r| r[1]).collect();
    let (lo, hi) = c.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// `max |xi~'' - W''(omega) xi~ - I~|` for interface 1 of k = 2 at 100 points.
pub fn second_corrector_residual(t: f64, exec: Exec) -> Result<(f64, Evidence)> {
    let p = AnsatzParams::explicit(2, t)?;
    let sc = SecondCorrector::build(&p, 1, exec)?;
    let mut e = Evidence::new(&["y", "residual"]);
    let mut worst: f64 = 0.0;
    for m in 0..100 {
        let y = -12.0 + 0.2417 * m as f64;
        let lhs = second_difference(|s| sc.value(s), y, 1e-2) - potential::w2(profile::omega(y)) * sc.value(y);
        let r = lhs - sc.projection().i_tilde(y);
        worst = worst.max(r.abs());
        e.push(vec![y, r]);
    }
    Ok((worst, e))
}

/// Spread of `C` in `|xi~(y)| <= C t^{-1/2} |y| e^{-sqrt2 |y|}`.
fn second_corrector_decay(exec: Exec) -> Result<(f64, Evidence)> {
    let mut e = Evidence::new(&["t", "C"]);
    for &t in &TIMES {
        let p = AnsatzParams::explicit(2, t)?;
        let sc = SecondCorrector::build(&p, 1, exec)?;
        let c = (1..300)
            .map(|m| -15.0 + 0.1 * m as f64)
            .filter(|y: &f64| y.abs() > 0.05)
            .map(|y| sc.value(y).abs() / (t.powf(-0.5) * y.abs() * (-SQRT_2 * y.abs()).exp()))
            .fold(0.0, f64::max);
        e.push(vec![t, c]);
    }
    Ok((spread(&e), e))
}

/// `max |int I~_i omega'|` for k = 4 over [`TIMES`].
fn orthogonality() -> Result<(f64, Evidence)> {
    let q = Quadrature::new(1e-16, 1e-13);
    let mut e = Evidence::new(&["t", "i", "projection"]);
    let mut worst: f64 = 0.0;
    for &t in &TIMES {
        let p = AnsatzParams::explicit(4, t)?;
        for i in 1..=4 {
            let pr = Projection::new(&p, i)?;
            let v = q.integrate_pieces(|y| pr.i_tilde(y) * profile::d1(y), &pr.breakpoints(), true)?.value;
            worst = worst.max(v.abs());
            e.push(vec![t, i as f64, v]);
        }
    }
    Ok((worst, e))
}

/// `|d_1 + 12 sqrt2 e^{-sqrt2 eta_2}| / (12 sqrt2 e^{-sqrt2 eta_2})` for k = 2.
pub fn d1_relative_error(t: f64) -> Result<f64> {
    let p = AnsatzParams::explicit(2, t)?;
    let lead = -12.0 * SQRT_2 * (-SQRT_2 * p.eta(2)).exp();
    let d = Projection::new(&p, 1)?.d();
    Ok(((d - lead) / lead).abs())
}

fn d_expansion_table() -> Result<Evidence> {
    let mut e = Evidence::new(&["t", "relative_error"]);
    for &t in &TIMES {
        e.push(vec![t, d1_relative_error(t)?]);
    }
    Ok(e)
}

/// Relative errors of the three projection cases for k = 2, interface 1.
pub fn case_errors(t: f64, exec: Exec) -> Result<[f64; 3]> {
    let p = AnsatzParams::explicit(2, t)?;
    let sc = SecondCorrector::build(&p, 1, exec)?;
    Ok([
        case_one(&p, 1, Neighbour::Right)?.relative_error(),
        case_two(&p, 1, Neighbour::Right)?.relative_error(),
        case_three(&p, &sc)?.relative_error(),
    ])
}

fn case_table(exec: Exec) -> Result<Evidence> {
    let mut e = Evidence::new(&["t", "case_one", "case_two", "case_three"]);
    for &t in &TIMES {
        let c = case_errors(t, exec)?;
        e.push(vec![t, c[0], c[1], c[2]]);
    }
    Ok(e)
}

/// `int Q(tau, y) dy`.
pub fn heat_kernel_mass(tau: f64) -> Result<f64> {
    let q = Quadrature::new(1e-13, 1e-12);
    Ok(2.0 * q.integrate(|y| heat_kernel(tau, y).unwrap_or(f64::NAN), Domain::Above(0.0))?.value)
}

/// Contour evaluation against plain real-axis quadrature.
fn heat_kernel_contour(exec: Exec) -> Result<(f64, Evidence)> {
    let pts: Vec<(f64, f64)> = TAUS.iter().flat_map(|&tau| (0..=8).map(move |m| (tau, 0.75 * m as f64))).collect();
    let vals = par::try_map(exec, &pts, |&(tau, y)| Ok::<_, Error>((heat_kernel(tau, y)?, heat_kernel_real_axis(tau, y)?)))?;
    let mut e = Evidence::new(&["tau", "y", "contour", "real_axis"]);
    let mut worst: f64 = 0.0;
    for (&(tau, y), &(a, b)) in pts.iter().zip(&vals) {
        worst = worst.max((a - b).abs());
        e.push(vec![tau, y, a, b]);
    }
    Ok((worst, e))
}

/// Largest relative Toda residual over `k = 2..=10` and [`TODA_TIMES`].
pub fn toda_residual_table(coefficient: f64) -> Result<(f64, Evidence)> {
    let mut e = Evidence::new(&["k", "t", "residual"]);
    let mut worst: f64 = 0.0;
    for k in 2..=10usize {
        for &t in &TODA_TIMES {
            let r = toda_residual_with(k, t, coefficient)?;
            worst = worst.max(r);
            e.push(vec![k as f64, t, r]);
        }
    }
    Ok((worst, e))
}

/// Largest eigenvalue error of `H` over `k = 2..=10`.
pub fn jacobian_spectrum() -> Result<(f64, Evidence)> {
    let mut e = Evidence::new(&["k", "m", "eigenvalue", "expected"]);
    let mut worst: f64 = 0.0;
    for k in 2..=10usize {
        for (m, &l) in jacobian_eigenvalues(k)?.iter().enumerate() {
            let x = expected_eigenvalue(m + 1);
            worst = worst.max((l - x).abs());
            e.push(vec![k as f64, (m + 1) as f64, l, x]);
        }
    }
    Ok((worst, e))
}
