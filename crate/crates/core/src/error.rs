use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("adaptive quadrature did not converge: estimate {estimate:e}, error {error:e} after {subdivisions} subdivisions")]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("interface positions are not strictly increasing (gap {gap:e} at index {index})")]
    OrderingViolated { index: usize, gap: f64 },

    #[error("interface gap collapsed: gap {gap:e} at index {index}, t = {t}")]
    GapCollapse { index: usize, gap: f64, t: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("inner integral of the second corrector did not cancel: mismatch {mismatch:e} (scale {scale:e})")]
    InnerIntegralUnstable { mismatch: f64, scale: f64 },

    #[error("grid spacing {dx} exceeds the maximum {max}")]
    GridTooCoarse { dx: f64, max: f64 },

    #[error("domain half-width {half_width} is too small; need at least {required}")]
    DomainTooSmall { half_width: f64, required: f64 },

    #[error("banded linear solve failed: zero pivot at row {row}")]
    LinearSolveFailure { row: usize },

    #[error("blow-up guard tripped at t = {t}: max |u| = {max_abs}")]
    BlowUpGuard { t: f64, max_abs: f64 },

    #[error("field has no sign change")]
    NoZeros,

    #[error("interface count changed from {expected} to {found} at snapshot {index} (t = {t})")]
    InterfaceCountChanged {
        expected: usize,
        found: usize,
        index: usize,
        t: f64,
    },

    #[error("fit window [{t_a}, {t_b}] holds {samples} samples; at least {required} needed")]
    WindowTooShort {
        t_a: f64,
        t_b: f64,
        samples: usize,
        required: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
