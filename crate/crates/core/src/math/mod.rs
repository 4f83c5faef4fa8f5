pub mod jet;
pub mod potential;
pub mod profile;
pub mod quadrature;
pub mod special;
pub mod stencil;

pub use jet::Jet;
pub use quadrature::{integrate, Domain, Estimate, Quadrature};
