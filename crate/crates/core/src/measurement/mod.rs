//! Interferometric measurement: synthesis from far fields and inversion of
//! the mirror-position dependence.

pub mod grids;
pub mod interferogram;
pub mod kspace;
pub mod simulate;

pub use grids::{stationary_mirror_position, LGrid, OmegaGrid};
pub use interferogram::{
    compute_m_tilde, extract_scattered_field, m_tilde_from_perturbation, synthesize_interferogram, Interferogram,
};
pub use kspace::KSpaceSample;
pub use simulate::{simulate_measurement, MeasurementConfig, MeasurementSet};
