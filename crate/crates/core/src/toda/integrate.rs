//! Dormand–Prince 5(4) with step-size control, stepping exactly onto the
//! requested output times.

use super::interfaces::InterfaceVector;
use super::system::{TodaKind, TodaSystem};
use crate::error::{Error, Result};

/// A sampled solution of an interface system.
#[derive(Debug, Clone, PartialEq)]
pub struct TodaTrajectory {
    pub kind: TodaKind,
    /// Strictly increasing sample times (`|t|` for the Allen–Cahn system).
    pub times: Vec<f64>,
    /// States at `times`: positions, or gaps for [`TodaKind::ChGaps`].
    pub states: Vec<Vec<f64>>,
    pub stats: IntegratorStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted scaled local error estimate (at most 1).
    pub max_error: f64,
}

impl TodaTrajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Gap series `eta_2..eta_k` per sample.
    pub fn gaps(&self) -> Vec<Vec<f64>> {
        match self.kind {
            TodaKind::ChGaps => self.states.clone(),
            _ => self.states.iter().map(|s| s.windows(2).map(|w| w[1] - w[0]).collect()).collect(),
        }
    }
}

/// Options for [`integrate_toda`].
#[derive(Debug, Clone, PartialEq)]
pub struct TodaOptions {
    pub tol: f64,
    /// Output samples per decade of `t`.
    pub samples_per_decade: usize,
    pub max_steps: usize,
}

impl Default for TodaOptions {
    fn default() -> Self {
        TodaOptions { tol: 1e-10, samples_per_decade: 40, max_steps: 1_000_000 }
    }
}

/// Log-spaced times from `t0` to `t1` inclusive.
pub fn log_times(t0: f64, t1: f64, per_decade: usize) -> Vec<f64> {
    let decades = (t1 / t0).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    let mut ts: Vec<f64> = (0..=n).map(|m| t0 * (t1 / t0).powf(m as f64 / n as f64)).collect();
    ts[0] = t0;
    ts[n] = t1;
    ts
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from `times[0]`, recording `y` at every entry
/// of `times`. `f` returns an error to abort (e.g. on gap collapse).
pub fn dopri5<F>(f: F, y0: &[f64], times: &[f64], tol: f64, max_steps: usize) -> Result<(Vec<Vec<f64>>, IntegratorStats)>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y0.len();
    let mut stats = IntegratorStats::default();
    let mut out = vec![y0.to_vec()];
    let mut t = times[0];
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    f(t, &y, &mut k[0])?;
    let span = times[times.len() - 1] - t;
    let mut h = (span * 1e-6).max(1e-6 * t.abs().max(1.0)).min(span);
    let mut fsal_valid = true;
    for &target in &times[1..] {
        while t < target {
            if stats.steps + stats.rejected >= max_steps {
                return Err(Error::StepSizeUnderflow { t, h });
            }
            let last = h >= target - t;
            let step = if last { target - t } else { h };
            if step <= 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t, h: step });
            }
            if !fsal_valid {
                f(t, &y, &mut k[0])?;
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += step * A[s][j] * kj[i];
                    }
                    tmp[i] = acc;
                }
                let (head, tail) = k.split_at_mut(s);
                let _ = head;
                f(t + C[s] * step, &tmp, &mut tail[0])?;
            }
            // Stage 7 was evaluated at the fifth-order solution.
            ynew.copy_from_slice(&tmp);
            let mut err = 0.0;
            for i in 0..n {
                let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * step;
                let sc = tol + tol * y[i].abs().max(ynew[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / n as f64).sqrt();
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y.copy_from_slice(&ynew);
                let (first, rest) = k.split_at_mut(1);
                first[0].copy_from_slice(&rest[5]);
                fsal_valid = true;
                stats.steps += 1;
                stats.max_error = stats.max_error.max(err);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h = step * fac;
                } else {
                    h = h.max(step * fac.min(1.0));
                }
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                fsal_valid = true;
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}

/// Integrate an interface system from `t0` to `t1`, sampling at log-spaced
/// times. For the Allen–Cahn system, `t0 < t1` are values of `s = -t`.
pub fn integrate_toda(system: &TodaSystem, init: &[f64], t0: f64, t1: f64, opts: &TodaOptions) -> Result<TodaTrajectory> {
    if !(t0 > 0.0 && t1 > t0) {
        return Err(Error::Domain(format!("need 0 < t0 < t1, got t0 = {t0}, t1 = {t1}")));
    }
    if init.len() != system.dim() {
        return Err(Error::Domain(format!("state has {} entries, system expects {}", init.len(), system.dim())));
    }
    match system.kind {
        TodaKind::ChGaps => {
            if let Some(i) = init.iter().position(|&g| !(g > 0.0)) {
                return Err(Error::GapCollapse { index: i + 2, gap: init[i], t: t0 });
            }
        }
        _ => {
            InterfaceVector::new(init.to_vec())?;
        }
    }
    let times = log_times(t0, t1, opts.samples_per_decade);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        system.eval(y, dy).map_err(|e| match e {
            Error::OrderingViolated { index, gap } => Error::GapCollapse { index, gap, t },
            other => other,
        })
    };
    let (states, stats) = dopri5(rhs, init, &times, opts.tol, opts.max_steps)?;
    Ok(TodaTrajectory { kind: system.kind, times, states, stats })
}
