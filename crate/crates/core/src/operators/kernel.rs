//! Discrete check of the kernel of `L^2`, `L = -d_xx + W''(omega)`.

use super::field::{dxx, Boundary, Grid};
use crate::error::{Error, Result};
use crate::math::{potential, profile};

/// Half-width the grid must cover.
pub const KERNEL_HALF_WIDTH: f64 = 20.0;

/// `max |L^2 phi|` on `grid`, with `L` discretised by second differences.
pub fn kernel_residual(phi: &[f64], grid: &Grid) -> Result<f64> {
    grid.check_resolution()?;
    if phi.len() != grid.n {
        return Err(Error::Domain(format!("{} samples on a grid of {} points", phi.len(), grid.n)));
    }
    let reach = (-grid.x0).min(grid.end());
    if reach < KERNEL_HALF_WIDTH - 1e-9 {
        return Err(Error::DomainTooSmall { half_width: reach, required: KERNEL_HALF_WIDTH });
    }
    let potential: Vec<f64> = grid.sample(|x| potential::w2(profile::omega(x)));
    let apply = |f: &[f64]| -> Vec<f64> {
        let fxx = dxx(f, grid.dx, Boundary::EvenReflection);
        f.iter().zip(&fxx).zip(&potential).map(|((&fi, &fxxi), &p)| -fxxi + p * fi).collect()
    };
    Ok(apply(&apply(phi)).iter().fold(0.0, |m, r| m.max(r.abs())))
}

/// `(dx, residual)` for the translation mode `omega'` on each spacing.
pub fn kernel_convergence(spacings: &[f64]) -> Result<Vec<(f64, f64)>> {
    spacings
        .iter()
        .map(|&dx| {
            let g = Grid::with_spacing(KERNEL_HALF_WIDTH, dx)?;
            Ok((dx, kernel_residual(&g.sample(profile::d1), &g)?))
        })
        .collect()
}
