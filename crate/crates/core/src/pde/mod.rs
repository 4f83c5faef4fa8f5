//! Time integration of the generalized Cahn–Hilliard equation on `[-L, L]`.

pub mod banded;
pub mod field;
pub mod solver;

pub use banded::{BandedLu, Pentadiagonal};
pub use field::{energy, init_from_ansatz, init_from_ansatz_with, Grid1D, ScalarField};
pub use solver::{run, step, EnergyReport, RunOutput, RunStats, SolverConfig, Stepper};
