//! Linearly implicit time stepping and the driver loop.

use super::banded::{BandedLu, Pentadiagonal};
use super::field::{energy, trapezoid, ScalarField};
use crate::error::{Error, Result};
use crate::operators::{f_of, Boundary, Grid};

/// Step-size schedule, splitting constants and output times.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt_initial: f64,
    pub dt_max: f64,
    /// Factor applied per step while the dissipation gate is open.
    pub growth: f64,
    /// `dt` never exceeds this fraction of the current time.
    pub time_fraction: f64,
    /// Growth is allowed while the dissipation stays below this multiple of its trend.
    pub trend_gate: f64,
    /// Weight of the newest sample in the dissipation trend.
    pub trend_rate: f64,
    /// Reject and halve steps that raise the energy by more than `energy_tol |W|`.
    pub error_control: bool,
    pub energy_tol: f64,
    /// Absolute allowance for rounding in the energy near equilibria.
    pub energy_floor: f64,
    pub dt_min: f64,
    /// `(a, b)` in `L0 = -D2^2 + a D2 - b I`.
    pub splitting: (f64, f64),
    pub t_end: f64,
    /// Strictly increasing output times; `t_end` is always appended.
    pub snapshots: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt_initial: 1e-3,
            dt_max: 0.05,
            growth: 1.02,
            time_fraction: 0.01,
            trend_gate: 10.0,
            trend_rate: 0.01,
            error_control: true,
            energy_tol: 1e-9,
            energy_floor: 1e-18,
            dt_min: 1e-10,
            splitting: (4.0, 4.0),
            t_end: 5e3,
            snapshots: Vec::new(),
        }
    }
}

impl SolverConfig {
    /// Default schedule with `per_decade` log-spaced snapshots on `[t0, t_end]`.
    pub fn log_spaced(t0: f64, t_end: f64, per_decade: usize) -> Self {
        SolverConfig { t_end, snapshots: crate::toda::integrate::log_times(t0, t_end, per_decade), ..Default::default() }
    }

    /// Adds output times, keeping the schedule sorted and free of duplicates.
    pub fn with_extra_snapshots(mut self, extra: &[f64]) -> Self {
        self.snapshots.extend_from_slice(extra);
        self.snapshots.sort_by(f64::total_cmp);
        self.snapshots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        self
    }

    /// Halves every time-step bound.
    pub fn halved(&self) -> Self {
        SolverConfig {
            dt_initial: 0.5 * self.dt_initial,
            dt_max: 0.5 * self.dt_max,
            time_fraction: 0.5 * self.time_fraction,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt_initial", self.dt_initial),
            ("dt_max", self.dt_max),
            ("time_fraction", self.time_fraction),
            ("trend_gate", self.trend_gate),
            ("energy_tol", self.energy_tol),
            ("dt_min", self.dt_min),
            ("t_end", self.t_end),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("solver setting {name} = {v} must be positive")));
            }
        }
        if !(self.growth >= 1.0) || !(self.trend_rate > 0.0 && self.trend_rate <= 1.0) {
            return Err(Error::Domain("growth must be >= 1 and trend_rate in (0, 1]".into()));
        }
        if self.snapshots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("snapshot times must be strictly increasing".into()));
        }
        Ok(())
    }

    fn cap(&self, t: f64) -> f64 {
        self.dt_max.min(self.time_fraction * t)
    }
}

/// Owns the discrete linear operator and its most recent factorisation.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    boundary: Boundary,
    l0: Pentadiagonal,
    factor: Option<(f64, BandedLu)>,
    factorizations: usize,
}

impl Stepper {
    pub fn new(u: &ScalarField, cfg: &SolverConfig) -> Result<Self> {
        if u.grid.boundary != Boundary::EvenReflection {
            return Err(Error::Domain("time stepping needs even-reflection boundaries".into()));
        }
        let grid = u.grid.grid()?;
        let d2 = Pentadiagonal::second_difference(grid.n, grid.dx);
        let (a, b) = cfg.splitting;
        let l0 = Pentadiagonal::square_of_tridiagonal(&d2)
            .combine(-1.0, &d2, a)
            .combine(1.0, &Pentadiagonal::identity(grid.n), -b);
        Ok(Stepper { grid, boundary: u.grid.boundary, l0, factor: None, factorizations: 0 })
    }

    pub fn factorizations(&self) -> usize {
        self.factorizations
    }

    /// One step of `(I - dt L0) (u' - u) = dt F(u)`.
    pub fn advance(&mut self, u: &ScalarField, dt: f64) -> Result<ScalarField> {
        if self.factor.as_ref().map_or(true, |(h, _)| *h != dt) {
            let m = Pentadiagonal::identity(self.grid.n).combine(1.0, &self.l0, -dt);
            self.factor = Some((dt, m.factor()?));
            self.factorizations += 1;
        }
        let mut delta = f_of(&u.u, &self.grid, self.boundary)?;
        delta.iter_mut().for_each(|v| *v *= dt);
        self.factor.as_ref().expect("factor set above").1.solve_in_place(&mut delta);
        let next = ScalarField { grid: u.grid, t: u.t + dt, u: u.u.iter().zip(&delta).map(|(a, b)| a + b).collect() };
        next.check()?;
        Ok(next)
    }
}

/// A single step from `u`; factors the operator afresh.
pub fn step(u: &ScalarField, dt: f64, cfg: &SolverConfig) -> Result<ScalarField> {
    if !(dt > 0.0 && dt <= cfg.dt_max) {
        return Err(Error::Domain(format!("time step {dt} outside (0, {}]", cfg.dt_max)));
    }
    Stepper::new(u, cfg)?.advance(u, dt)
}

/// Energy and dissipation sampled at the snapshot times.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// `int ((u^{n+1} - u^n)/dt)^2 dx` of the step ending at each time.
    pub dissipation: Vec<f64>,
}

impl EnergyReport {
    pub fn is_non_increasing(&self, rel_tol: f64) -> bool {
        self.energy.windows(2).all(|w| w[1] <= w[0] + rel_tol * w[0].abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunStats {
    pub steps: usize,
    pub rejected: usize,
    pub factorizations: usize,
    /// Largest accepted per-step energy increase relative to the energy.
    pub max_energy_increase: f64,
    pub final_dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// Initial state followed by one state per output time.
    pub snapshots: Vec<ScalarField>,
    pub energy: EnergyReport,
    pub stats: RunStats,
}

/// Integrates from `u0` to `cfg.t_end`.
pub fn run(u0: &ScalarField, cfg: &SolverConfig) -> Result<RunOutput> {
    cfg.validate()?;
    u0.check()?;
    let t0 = u0.t;
    if !(t0 > 0.0) {
        return Err(Error::Domain(format!("initial time {t0} must be positive")));
    }
    if !(cfg.t_end > t0) {
        return Err(Error::Domain(format!("t_end = {} must exceed the initial time {t0}", cfg.t_end)));
    }
    let mut schedule: Vec<f64> = cfg.snapshots.iter().copied().filter(|&s| s > t0 && s < cfg.t_end).collect();
    schedule.push(cfg.t_end);

    let mut stepper = Stepper::new(u0, cfg)?;
    let mut u = u0.clone();
    let mut e = energy(&u)?;
    let mut out = RunOutput {
        snapshots: vec![u.clone()],
        energy: EnergyReport { times: vec![t0], energy: vec![e], dissipation: vec![f64::NAN] },
        stats: RunStats::default(),
    };
    let mut dt = cfg.dt_initial.min(cfg.cap(t0));
    let mut trend: Option<f64> = None;
    let dx = u.grid.dx();

    for &target in &schedule {
        while u.t < target {
            let nominal = dt.min(cfg.cap(u.t));
            let hit = u.t + nominal >= target * (1.0 - 1e-14);
            let h = if hit { target - u.t } else { nominal };
            let mut next = stepper.advance(&u, h)?;
            let e_next = energy(&next)?;
            let rise = e_next - e;
            if cfg.error_control && rise > cfg.energy_tol * e.abs() + cfg.energy_floor {
                out.stats.rejected += 1;
                dt = 0.5 * h;
                if dt < cfg.dt_min {
                    return Err(Error::StepSizeUnderflow { t: u.t, h: dt });
                }
                continue;
            }
            if e.abs() > 0.0 {
                out.stats.max_energy_increase = out.stats.max_energy_increase.max(rise / e.abs());
            }
            let rate: Vec<f64> = next.u.iter().zip(&u.u).map(|(a, b)| ((a - b) / h).powi(2)).collect();
            let diss = trapezoid(&rate, dx);
            if hit {
                next.t = target;
            }
            u = next;
            e = e_next;
            out.stats.steps += 1;

            let tr = trend.map_or(diss, |tr| (1.0 - cfg.trend_rate) * tr + cfg.trend_rate * diss);
            if !hit && diss <= cfg.trend_gate * tr {
                dt = (dt * cfg.growth).min(cfg.cap(u.t));
            }
            trend = Some(tr);
            if hit {
                out.snapshots.push(u.clone());
                out.energy.times.push(u.t);
                out.energy.energy.push(e);
                out.energy.dissipation.push(diss);
            }
        }
    }
    out.stats.factorizations = stepper.factorizations();
    out.stats.final_dt = dt;
    Ok(out)
}
