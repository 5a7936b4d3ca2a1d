//! Real pulse shapes `f(t)` and their spectra, and the plane-wave initial field.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::vec3::Vec3;
use crate::scalar::{lit, re, Real};

/// Spectrum `f̂(ω)` of a real pulse. Both variants are even and real in `ω`,
/// so `f̂(−ω) = conj f̂(ω)` holds exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseEnvelope {
    /// `A [e^{−(ω−ν)²/2w²} + e^{−(ω+ν)²/2w²}]`.
    Gaussian { center: f64, width: f64, amplitude: f64 },
    /// `A [δ(ω−ν) + δ(ω+ν)]`, used with a single-frequency grid of unit weight.
    Line { center: f64, amplitude: f64 },
}

impl PulseEnvelope {
    pub fn gaussian(center: f64, width: f64) -> Self {
        PulseEnvelope::Gaussian {
            center,
            width,
            amplitude: 1.0,
        }
    }

    pub fn center(&self) -> f64 {
        match *self {
            PulseEnvelope::Gaussian { center, .. } | PulseEnvelope::Line { center, .. } => center,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            PulseEnvelope::Gaussian {
                center,
                width,
                amplitude,
            } => center > 0.0 && width > 0.0 && amplitude.is_finite() && amplitude != 0.0,
            PulseEnvelope::Line { center, amplitude } => center > 0.0 && amplitude.is_finite() && amplitude != 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid pulse {self:?}")))
        }
    }

    /// `f̂(ω)`. For `Line` this is the weight of the spectral line at `ω = ±ν`
    /// and zero elsewhere.
    pub fn f_hat<T: Real>(&self, omega: T) -> Complex<T> {
        match *self {
            PulseEnvelope::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let (nu, w, a) = (lit::<T>(center), lit::<T>(width), lit::<T>(amplitude));
                let two = lit::<T>(2.0);
                let g = |d: T| (-(d * d) / (two * w * w)).exp();
                re(a * (g(omega - nu) + g(omega + nu)))
            }
            PulseEnvelope::Line { center, amplitude } => {
                let nu = lit::<T>(center);
                if (omega.abs() - nu).abs() <= lit::<T>(1e-9) * nu {
                    re(lit::<T>(amplitude))
                } else {
                    re(T::zero())
                }
            }
        }
    }

    /// `f(t) = (1/2π) ∫ f̂(ω) e^{−iωt} dω`.
    pub fn time_signal<T: Real>(&self, t: T) -> T {
        match *self {
            PulseEnvelope::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let (nu, w, a) = (lit::<T>(center), lit::<T>(width), lit::<T>(amplitude));
                let two = lit::<T>(2.0);
                two * a * w / T::TAU().sqrt() * (nu * t).cos() * (-(w * w * t * t) / two).exp()
            }
            PulseEnvelope::Line { center, amplitude } => {
                lit::<T>(amplitude) / T::PI() * (lit::<T>(center) * t).cos()
            }
        }
    }
}

/// Initial field `E⁰(t, x) = q f(t + x₃/c)`; `q` must lie in the `x₁x₂` plane.
pub fn plane_pulse<T: Real>(q: &Vec3<T>, pulse: &PulseEnvelope, c: T, t: T, x: &Vec3<T>) -> Result<Vec3<T>> {
    if q[2] != T::zero() {
        return Err(Error::InvalidArgument(
            "polarization must have zero third component for a divergence-free field".into(),
        ));
    }
    if !(c > T::zero()) {
        return Err(Error::InvalidArgument("wave speed must be positive".into()));
    }
    let f = pulse.time_signal(t + x[2] / c);
    Ok([q[0] * f, q[1] * f, T::zero()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_is_conjugate_symmetric() {
        let p = PulseEnvelope::gaussian(6.0, 0.4);
        for &w in &[0.3, 5.5, 6.0, 7.1] {
            assert_eq!(p.f_hat(-w), p.f_hat::<f64>(w).conj());
        }
    }

    #[test]
    fn cosine_line_pulse() {
        let nu = 2.0;
        let p = PulseEnvelope::Line {
            center: nu,
            amplitude: std::f64::consts::PI,
        };
        let e = plane_pulse(&[1.0, 0.0, 0.0], &p, 1.0, 0.3, &[0.0, 0.0, 0.2]).unwrap();
        assert!((e[0] - (nu * 0.5).cos()).abs() < 1e-15);
        assert_eq!(e[1], 0.0);
    }

    #[test]
    fn longitudinal_polarization_is_rejected() {
        let p = PulseEnvelope::gaussian(1.0, 0.1);
        assert!(plane_pulse(&[0.0, 0.0, 1.0], &p, 1.0, 0.0, &[0.0; 3]).is_err());
    }
}
