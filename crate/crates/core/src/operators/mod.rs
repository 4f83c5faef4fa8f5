//! The nonlinear operator, its linearisation, the kernel check for `L^2`
//! and the fourth-order heat kernel.

pub mod field;
pub mod heat;
pub mod kernel;

pub use field::{chemical_potential, dxx, f_of, f_prime, Boundary, Grid, MAX_DX};
pub use heat::{damped_kernel_table, decay_constant, duhamel_step, heat_kernel, heat_kernel_real_axis};
pub use kernel::{kernel_convergence, kernel_residual, KERNEL_HALF_WIDTH};
