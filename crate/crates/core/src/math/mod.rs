//! Fourier conventions, vector algebra, pulses and Green functions.

pub mod direction;
pub mod fourier;
pub mod frequency;
pub mod green;
pub mod pulse;
pub mod vec3;

pub use direction::{double_cross, fibonacci_cap, project_transverse, Direction};
pub use fourier::{fft3, ft1d, ift1d, Spectrum};
pub use frequency::FrequencySpec;
pub use green::{dyadic_green, scalar_green};
pub use pulse::{plane_pulse, PulseEnvelope};
pub use vec3::{CMat3, CVec3, Vec3};
