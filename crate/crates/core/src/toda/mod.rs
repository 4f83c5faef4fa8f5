//! Interface ODE systems: the Cahn–Hilliard Toda system, its gap form, its
//! explicit solution and linearization, and the Allen–Cahn comparison.

pub mod explicit;
pub mod integrate;
pub mod interfaces;
pub mod jacobian;
pub mod system;

pub use explicit::{explicit_gap_solution, explicit_solution, explicit_velocity, toda_residual};
pub use integrate::{integrate_toda, TodaOptions, TodaTrajectory};
pub use interfaces::InterfaceVector;
pub use jacobian::{jacobian_eigenvalues, jacobian_h};
pub use system::{ac_rhs, ch_gap_rhs, ch_rhs, TodaKind, TodaSystem};
