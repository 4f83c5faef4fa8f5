//! Multi-interface dynamics for the one-dimensional parabolic Cahn–Hilliard
//! equation `u_t = -(u_xx - W'(u))_xx + W''(u)(u_xx - W'(u))`.

pub mod ansatz;
pub mod error;
pub mod math;
pub mod operators;
pub mod par;
pub mod pde;
pub mod toda;
pub mod tracker;
pub mod verify;

pub use error::{Error, Result};
