//! The corrected approximate solution `z(t, x)`, its error `E` and the
//! weight `Phi` used to measure it.

pub mod assemble;
pub mod first;
pub mod params;
pub mod projections;
pub mod second;
pub mod weight;

pub use assemble::{f_from_jet, Ansatz, CorrectorSet, ErrorField, Explicit, Fixed, InterfaceCurve};
pub use first::FirstCorrector;
pub use params::{AnsatzParams, DEFAULT_ALPHA, DEFAULT_SIGMA};
pub use projections::{case_one, case_three, case_two, omega_prime_norm, CaseIntegral, Neighbour};
pub use second::{Projection, SecondCorrector};
pub use weight::{error_table, norm_grid, weighted_error_norm, weighted_norm_on, NormReport, Weight};
