//! Polarization-sensitive OCT: second-order Born forward model, Jones-calculus
//! interferograms, and reconstruction of an orthotropic susceptibility.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the precision used by the command-line tool.

pub mod error;
pub mod forward;
pub mod inverse;
pub mod io;
pub mod jones;
pub mod linalg;
pub mod math;
pub mod measurement;
pub mod phantom;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type Susceptibility = forward::OrthotropicSusceptibility<f64>;
pub type Susceptibility32 = forward::OrthotropicSusceptibility<f32>;
pub type Setup = jones::PolarizationSetup<f64>;
pub type Grid = forward::VoxelGrid<f64>;
