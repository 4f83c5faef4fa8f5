//! Interface trajectories and their logarithmic fits.

use std::f64::consts::SQRT_2;

use super::zeros::find_zeros;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::pde::ScalarField;
use crate::toda::explicit::{constants, TIME_SCALE};
use crate::toda::interfaces::check_ordered;
use crate::toda::TodaTrajectory;

/// Minimum number of samples in a fit window.
pub const MIN_FIT_SAMPLES: usize = 20;

/// Positions `gamma_1 < ... < gamma_k` sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceTrack {
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    /// `association[m][j]`: index of the zero of snapshot `m` assigned to interface `j`.
    pub association: Vec<Vec<usize>>,
}

impl InterfaceTrack {
    /// Track from already associated series.
    pub fn from_series(times: Vec<f64>, positions: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != positions.len() || times.is_empty() {
            return Err(Error::Domain("track needs one position vector per time".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("track times must be strictly increasing".into()));
        }
        let k = positions[0].len();
        for p in &positions {
            if p.len() != k {
                return Err(Error::Domain("inconsistent interface count".into()));
            }
            check_ordered(p)?;
        }
        let association = vec![(0..k).collect(); times.len()];
        Ok(InterfaceTrack { times, positions, association })
    }

    /// Track of a Toda trajectory in positions.
    pub fn from_toda(traj: &TodaTrajectory) -> Result<Self> {
        Self::from_series(traj.times.clone(), traj.states.clone())
    }

    pub fn k(&self) -> usize {
        self.positions[0].len()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Series of interface `j` (1-based).
    pub fn series(&self, j: usize) -> Vec<f64> {
        self.positions.iter().map(|p| p[j - 1]).collect()
    }

    /// Gap series `eta_j = gamma_j - gamma_{j-1}`, `j = 2..=k`, per time.
    pub fn gaps(&self) -> Vec<Vec<f64>> {
        self.positions.iter().map(|p| p.windows(2).map(|w| w[1] - w[0]).collect()).collect()
    }

    /// Positions linearly interpolated in `ln t`.
    pub fn at(&self, t: f64) -> Option<Vec<f64>> {
        let m = self.times.partition_point(|&s| s < t);
        if m == 0 {
            return (self.times[0] == t).then(|| self.positions[0].clone());
        }
        if m == self.times.len() {
            return None;
        }
        let (t0, t1) = (self.times[m - 1].ln(), self.times[m].ln());
        let w = (t.ln() - t0) / (t1 - t0);
        Some(self.positions[m - 1].iter().zip(&self.positions[m]).map(|(a, b)| a + w * (b - a)).collect())
    }
}

/// Interface track of a sequence of PDE states.
pub fn track(snapshots: &[ScalarField]) -> Result<InterfaceTrack> {
    track_with(snapshots, Exec::default())
}

pub fn track_with(snapshots: &[ScalarField], exec: Exec) -> Result<InterfaceTrack> {
    if snapshots.is_empty() {
        return Err(Error::Domain("no snapshots to track".into()));
    }
    let zeros = par::try_map(exec, snapshots, find_zeros)?;
    let k = zeros[0].len();
    let mut positions = vec![zeros[0].clone()];
    let mut association = vec![(0..k).collect::<Vec<_>>()];
    for m in 1..snapshots.len() {
        if zeros[m].len() != k {
            return Err(Error::InterfaceCountChanged { expected: k, found: zeros[m].len(), index: m, t: snapshots[m].t });
        }
        let prev = &positions[m - 1];
        let assign = associate(prev, &zeros[m]);
        let next: Vec<f64> = assign.iter().map(|&z| zeros[m][z]).collect();
        let half_gap = 0.5 * prev.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if let Some(j) = (0..k).find(|&j| (next[j] - prev[j]).abs() >= half_gap) {
            return Err(Error::Domain(format!(
                "interface {} jumped by {} at snapshot {m} (t = {})",
                j + 1,
                next[j] - prev[j],
                snapshots[m].t
            )));
        }
        check_ordered(&next)?;
        positions.push(next);
        association.push(assign);
    }
    let times: Vec<f64> = snapshots.iter().map(|s| s.t).collect();
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("snapshot times must be strictly increasing".into()));
    }
    Ok(InterfaceTrack { times, positions, association })
}

/// Greedy nearest-neighbour matching: closest pairs are fixed first.
fn associate(prev: &[f64], zeros: &[f64]) -> Vec<usize> {
    let mut pairs: Vec<(f64, usize, usize)> =
        prev.iter().enumerate().flat_map(|(j, p)| zeros.iter().enumerate().map(move |(z, q)| ((p - q).abs(), j, z))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![usize::MAX; prev.len()];
    let mut used = vec![false; zeros.len()];
    for (_, j, z) in pairs {
        if out[j] == usize::MAX && !used[z] {
            out[j] = z;
            used[z] = true;
        }
    }
    out
}

/// Least-squares line `y = slope ln t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum::<f64>() / n).sqrt();
    LineFit { slope, intercept, rms }
}

/// Fits of every interface and every gap against `ln t`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFit {
    pub window: (f64, f64),
    pub samples: usize,
    pub interfaces: Vec<LineFit>,
    /// Gaps `eta_2..eta_k`.
    pub gaps: Vec<LineFit>,
}

/// Default window `[max(10 T, t_end / 100), t_end]`.
pub fn default_window(t0: f64, t_end: f64) -> (f64, f64) {
    ((10.0 * t0).max(t_end / 100.0), t_end)
}

pub fn fit_log_law(track: &InterfaceTrack, window: (f64, f64)) -> Result<LogFit> {
    let (ta, tb) = window;
    let slack = 1e-12 * tb.abs();
    let first = track.times[0];
    let last = *track.times.last().expect("track is never empty");
    if !(ta < tb) || ta < first - slack || tb > last + slack {
        return Err(Error::Domain(format!("fit window [{ta}, {tb}] outside the track support [{first}, {last}]")));
    }
    let idx: Vec<usize> = (0..track.len()).filter(|&m| track.times[m] >= ta - slack && track.times[m] <= tb + slack).collect();
    if idx.len() < MIN_FIT_SAMPLES {
        return Err(Error::WindowTooShort { t_a: ta, t_b: tb, samples: idx.len(), required: MIN_FIT_SAMPLES });
    }
    let lt: Vec<f64> = idx.iter().map(|&m| track.times[m].ln()).collect();
    let k = track.k();
    let interfaces = (0..k)
        .map(|j| fit_line(&lt, &idx.iter().map(|&m| track.positions[m][j]).collect::<Vec<_>>()))
        .collect();
    let gaps = (1..k)
        .map(|j| {
            let y: Vec<f64> = idx.iter().map(|&m| track.positions[m][j] - track.positions[m][j - 1]).collect();
            fit_line(&lt, &y)
        })
        .collect();
    Ok(LogFit { window, samples: idx.len(), interfaces, gaps })
}

/// `(1/(2 sqrt2)) (j - (k+1)/2)`.
pub fn expected_slope(k: usize, j: usize) -> f64 {
    (j as f64 - 0.5 * (k as f64 + 1.0)) / (2.0 * SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradeRow {
    pub j: usize,
    pub slope: f64,
    pub slope_expected: f64,
    /// Relative error, or the absolute slope where none is expected.
    pub rel_err: f64,
    pub intercept: f64,
    pub intercept_expected: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradeReport {
    pub k: usize,
    pub rows: Vec<GradeRow>,
    /// Gap slopes against `1/(2 sqrt2)`.
    pub gap_rows: Vec<GradeRow>,
}

impl GradeReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }
}

fn rel(value: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        value.abs()
    } else {
        ((value - expected) / expected).abs()
    }
}

/// Compares fitted slopes with the leading-order law. Intercepts are reported only.
pub fn grade(fit: &LogFit, k: usize) -> Result<GradeReport> {
    if fit.interfaces.len() != k {
        return Err(Error::Domain(format!("fit holds {} interfaces, expected {k}", fit.interfaces.len())));
    }
    let a = if k >= 2 { constants(k) } else { vec![0.0] };
    let rows = fit
        .interfaces
        .iter()
        .enumerate()
        .map(|(j0, f)| {
            let j = j0 + 1;
            let e = expected_slope(k, j);
            GradeRow {
                j,
                slope: f.slope,
                slope_expected: e,
                rel_err: rel(f.slope, e),
                intercept: f.intercept,
                intercept_expected: a[j0] + e * TIME_SCALE.ln(),
                rms: f.rms,
            }
        })
        .collect::<Vec<_>>();
    let gap_rows = fit
        .gaps
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let e = 1.0 / (2.0 * SQRT_2);
            GradeRow {
                j: i + 2,
                slope: f.slope,
                slope_expected: e,
                rel_err: rel(f.slope, e),
                intercept: f.intercept,
                intercept_expected: rows[i + 1].intercept_expected - rows[i].intercept_expected,
                rms: f.rms,
            }
        })
        .collect();
    Ok(GradeReport { k, rows, gap_rows })
}

/// Empirical exponent `p` in `|gamma_j - gamma^0_j| ~ t^p` over the window, per
/// interface. Reported, never graded.
pub fn deviation_exponents(track: &InterfaceTrack, window: (f64, f64)) -> Result<Vec<f64>> {
    let k = track.k();
    let idx: Vec<usize> = (0..track.len()).filter(|&m| track.times[m] >= window.0 && track.times[m] <= window.1).collect();
    if idx.len() < 2 {
        return Err(Error::WindowTooShort { t_a: window.0, t_b: window.1, samples: idx.len(), required: 2 });
    }
    let lt: Vec<f64> = idx.iter().map(|&m| track.times[m].ln()).collect();
    (0..k)
        .map(|j| {
            let mut y = Vec::with_capacity(idx.len());
            for &m in &idx {
                let g0 = crate::toda::explicit_solution(k, track.times[m])?;
                y.push((track.positions[m][j] - g0.at(j + 1)).abs().max(f64::MIN_POSITIVE).ln());
            }
            Ok(fit_line(&lt, &y).slope)
        })
        .collect()
}
