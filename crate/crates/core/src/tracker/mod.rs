//! Interface extraction from PDE states and comparison with the Toda law.

pub mod track;
pub mod zeros;

pub use track::{
    default_window, deviation_exponents, expected_slope, fit_line, fit_log_law, grade, track, track_with, GradeReport,
    GradeRow, InterfaceTrack, LineFit, LogFit, MIN_FIT_SAMPLES,
};
pub use zeros::{find_zeros, zeros_of_samples};
