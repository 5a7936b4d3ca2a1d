//! Desk-scale configuration shared by the end-to-end tests.
#![allow(dead_code)]

use num_complex::Complex;
use psoct::forward::{EquivalentSphere, GridSpec};
use psoct::jones::PolarizationSetup;
use psoct::math::direction::{fibonacci_cap, Direction};
use psoct::math::pulse::PulseEnvelope;
use psoct::measurement::{simulate_measurement, KSpaceSample, MeasurementConfig, OmegaGrid};
use psoct::phantom::PhantomSpec;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NU: f64 = std::f64::consts::TAU;
pub const AMPLITUDES: [f64; 4] = [1.0, 0.5, 0.8, 0.6];

/// 12³ voxels of side λ/20 holding a centred Gaussian of width 0.075.
pub fn desk_phantom(chi0: f64) -> PhantomSpec {
    PhantomSpec::gaussian(GridSpec { n: [12, 12, 12], h: 0.05 }, chi0, 1e-3, 0.075, AMPLITUDES)
}

/// 17 frequencies `ν(1 + j/40)`, 128 mirror positions, far detector.
pub fn desk_measurement() -> MeasurementConfig {
    MeasurementConfig {
        omegas: OmegaGrid::uniform(NU, NU / 40.0, 8).unwrap(),
        l_count: 128,
        rho: 1000.0,
        c: 1.0,
        born_order: 2,
        noise: 0.0,
    }
}

pub fn desk_pulse() -> PulseEnvelope {
    PulseEnvelope::gaussian(NU, 0.06 * NU)
}

pub fn desk_directions() -> Vec<Direction<f64>> {
    fibonacci_cap(200, 0.3)
}

/// Inversion frequencies `0.9ν, ν, 1.1ν`.
pub fn desk_omegas() -> Vec<f64> {
    let g = desk_measurement().omegas;
    [4, 8, 12].iter().map(|&i| g.omega_at::<f64>(i)).collect()
}

pub fn standard_setups() -> [PolarizationSetup<f64>; 2] {
    [PolarizationSetup::standard(1), PolarizationSetup::standard(2)]
}

/// Extracted samples of the desk measurement, frequency-major.
pub fn desk_samples(spec: &PhantomSpec, seed: u64) -> Vec<KSpaceSample<f64>> {
    let sus = spec.rasterize::<f64>().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = simulate_measurement(
        &sus,
        &standard_setups(),
        &desk_pulse(),
        &desk_measurement(),
        &desk_directions(),
        &EquivalentSphere,
        &mut rng,
    )
    .unwrap();
    set.samples(&desk_omegas()).unwrap()
}

/// Deterministic uniform numbers for hand-rolled random checks.
pub struct Uniform(ChaCha8Rng);

impl Uniform {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// In `[0, 1)`.
    pub fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn sym(&mut self) -> f64 {
        2.0 * self.next() - 1.0
    }

    pub fn complex(&mut self) -> Complex<f64> {
        Complex::new(self.sym(), self.sym())
    }

    pub fn cvec(&mut self) -> [Complex<f64>; 3] {
        [self.complex(), self.complex(), self.complex()]
    }

    pub fn cmat(&mut self) -> [[Complex<f64>; 3]; 3] {
        [self.cvec(), self.cvec(), self.cvec()]
    }

    /// Uniform on the upper unit hemisphere.
    pub fn upper_direction(&mut self) -> Direction<f64> {
        let z = 1.0 - self.next();
        let phi = std::f64::consts::TAU * self.next();
        let r = (1.0 - z * z).sqrt();
        Direction::normalized([r * phi.cos(), r * phi.sin(), z]).unwrap()
    }
}

pub fn max_dev(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn rel_l2(got: &[Complex<f64>], want: &[Complex<f64>]) -> f64 {
    psoct::linalg::rel_err(got, want)
}
