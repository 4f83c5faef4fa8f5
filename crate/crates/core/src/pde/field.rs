//! Truncated domain, sampled states and the Lyapunov energy.

use crate::ansatz::{Ansatz, AnsatzParams};
use crate::error::{Error, Result};
use crate::math::profile;
use crate::operators::{chemical_potential, Boundary, Grid};
use crate::par::Exec;
use crate::toda::explicit_solution;

/// Smallest point count accepted for a PDE grid.
pub const MIN_POINTS: usize = 64;
/// Distance kept between the outermost interface and the domain end.
pub const BOUNDARY_MARGIN: f64 = 12.0;
/// Default smallest admissible gap of the initial interfaces.
pub const DEFAULT_MIN_GAP: f64 = 3.0;
/// States leaving `[-BLOW_UP, BLOW_UP]` abort the run.
pub const BLOW_UP: f64 = 1.5;

/// `[-L, L]` sampled at `N` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub half_width: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::Domain(format!("PDE grid needs at least {MIN_POINTS} points, got {n}")));
        }
        let g = Grid1D { half_width, n, boundary: Boundary::EvenReflection };
        g.grid()?.check_resolution()?;
        Ok(g)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::symmetric(self.half_width, self.n)
    }

    /// Same domain with the spacing halved.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.half_width, 2 * self.n - 1)
    }
}

impl Default for Grid1D {
    fn default() -> Self {
        Grid1D { half_width: 30.0, n: 1201, boundary: Boundary::EvenReflection }
    }
}

/// A state `u(t, x_i)` on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid1D,
    pub t: f64,
    pub u: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid1D, t: f64, u: Vec<f64>) -> Result<Self> {
        if u.len() != grid.n {
            return Err(Error::Domain(format!("{} samples on a grid of {} points", u.len(), grid.n)));
        }
        let f = ScalarField { grid, t, u };
        f.check()?;
        Ok(f)
    }

    pub fn sample(grid: Grid1D, t: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let u = grid.grid()?.sample(f);
        Self::new(grid, t, u)
    }

    pub fn x(&self) -> Vec<f64> {
        // The symmetric constructor cannot fail for a validated Grid1D.
        self.grid.grid().map(|g| g.points()).unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
    }

    /// Blow-up guard: every sample finite with `|u| <= 1.5`.
    pub fn check(&self) -> Result<()> {
        let m = self.max_abs();
        if m.is_finite() && m <= BLOW_UP {
            Ok(())
        } else {
            Err(Error::BlowUpGuard { t: self.t, max_abs: m })
        }
    }
}

/// Composite trapezoid rule.
pub(crate) fn trapezoid(v: &[f64], dx: f64) -> f64 {
    let n = v.len();
    dx * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1]))
}

/// `1/2 int (u_xx - W'(u))^2 dx`.
pub fn energy(u: &ScalarField) -> Result<f64> {
    let g = u.grid.grid()?;
    let w = chemical_potential(&u.u, &g, u.grid.boundary)?;
    let sq: Vec<f64> = w.iter().map(|v| 0.5 * v * v).collect();
    Ok(trapezoid(&sq, g.dx))
}

/// Samples the ansatz `z(T, .)` built on `gamma^0(T)`.
pub fn init_from_ansatz(k: usize, t: f64, grid: Grid1D) -> Result<ScalarField> {
    init_from_ansatz_with(k, t, grid, DEFAULT_MIN_GAP, Exec::default())
}

/// [`init_from_ansatz`] with an explicit gap threshold. `k = 1` samples the
/// single profile.
pub fn init_from_ansatz_with(k: usize, t: f64, grid: Grid1D, min_gap: f64, exec: Exec) -> Result<ScalarField> {
    if k == 1 {
        check_width(grid, 0.0)?;
        return ScalarField::sample(grid, t, profile::omega);
    }
    let gamma = explicit_solution(k, t)?;
    let gaps = gamma.gaps();
    if let Some(p) = gaps.iter().position(|&g| g < min_gap) {
        return Err(Error::GapCollapse { index: p + 2, gap: gaps[p], t });
    }
    check_width(grid, gamma.at(k))?;
    let ansatz = Ansatz::build(AnsatzParams::explicit(k, t)?, exec)?;
    ScalarField::sample(grid, t, |x| ansatz.z(x))
}

fn check_width(grid: Grid1D, outer: f64) -> Result<()> {
    let required = outer.abs() + BOUNDARY_MARGIN;
    if grid.half_width < required {
        return Err(Error::DomainTooSmall { half_width: grid.half_width, required });
    }
    Ok(())
}
