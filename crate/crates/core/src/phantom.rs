//! Phantoms built from simple shapes, their voxelization, and closed-form
//! Fourier transforms.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::grid::{GridSpec, VoxelGrid};
use crate::forward::susceptibility::OrthotropicSusceptibility;
use crate::math::vec3::Vec3;
use crate::scalar::{cis, lit, Real};

/// One primitive with values `(ψ₁₁, ψ₁₂, ψ₂₂, ψ₃₃)`, each stored as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `values · exp(−|x − center|² / (2σ²))`.
    Gaussian {
        center: [f64; 3],
        sigma: f64,
        values: [Complex<f64>; 4],
    },
    Sphere {
        center: [f64; 3],
        radius: f64,
        values: [Complex<f64>; 4],
    },
    Box {
        center: [f64; 3],
        half_widths: [f64; 3],
        values: [Complex<f64>; 4],
    },
}

/// Gaussians must fit within the domain to this many standard deviations.
pub const GAUSSIAN_SUPPORT: f64 = 3.0;

impl Shape {
    pub fn values(&self) -> &[Complex<f64>; 4] {
        match self {
            Shape::Gaussian { values, .. } | Shape::Sphere { values, .. } | Shape::Box { values, .. } => values,
        }
    }

    fn center(&self) -> [f64; 3] {
        match self {
            Shape::Gaussian { center, .. } | Shape::Sphere { center, .. } | Shape::Box { center, .. } => *center,
        }
    }

    fn half_extent(&self) -> [f64; 3] {
        match self {
            Shape::Gaussian { sigma, .. } => [GAUSSIAN_SUPPORT * sigma; 3],
            Shape::Sphere { radius, .. } => [*radius; 3],
            Shape::Box { half_widths, .. } => *half_widths,
        }
    }

    /// Profile value in `[0, 1]` at `x`.
    pub fn profile(&self, x: &[f64; 3]) -> f64 {
        let c = self.center();
        let d = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
        match self {
            Shape::Gaussian { sigma, .. } => (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (2.0 * sigma * sigma)).exp(),
            Shape::Sphere { radius, .. } => {
                if d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= radius * radius {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Box { half_widths, .. } => {
                if (0..3).all(|i| d[i].abs() <= half_widths[i]) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Continuum transform `∫ e^{−i⟨k,x⟩} profile(x) dx`.
    pub fn profile_transform<T: Real>(&self, k: &Vec3<T>) -> Complex<T> {
        let c = self.center();
        let kc = k[0] * lit(c[0]) + k[1] * lit(c[1]) + k[2] * lit(c[2]);
        let shift = cis(-kc);
        let kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let amp: T = match self {
            Shape::Gaussian { sigma, .. } => {
                let s = lit::<T>(*sigma);
                (T::TAU() * s * s).powf(lit(1.5)) * (-(s * s) * kk / lit(2.0)).exp()
            }
            Shape::Sphere { radius, .. } => {
                let r = lit::<T>(*radius);
                let q = kk.sqrt();
                let qr = q * r;
                if qr < lit(1e-4) {
                    lit::<T>(4.0 / 3.0) * T::PI() * r * r * r * (T::one() - qr * qr / lit(10.0))
                } else {
                    lit::<T>(4.0) * T::PI() * (qr.sin() - qr * qr.cos()) / (q * q * q)
                }
            }
            Shape::Box { half_widths, .. } => (0..3)
                .map(|i| {
                    let a = lit::<T>(half_widths[i]);
                    let x = k[i] * a;
                    if x.abs() < lit(1e-8) {
                        lit::<T>(2.0) * a
                    } else {
                        lit::<T>(2.0) * x.sin() / k[i]
                    }
                })
                .fold(T::one(), |p, f| p * f),
        };
        shift * amp
    }
}

/// Shapes on a voxel grid with the background constant and perturbation size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhantomSpec {
    pub grid: GridSpec,
    pub chi0: f64,
    pub eps: f64,
    #[serde(default)]
    pub shapes: Vec<Shape>,
}

impl PhantomSpec {
    pub fn validate(&self) -> Result<()> {
        let grid = VoxelGrid::<f64>::from_spec(&self.grid)?;
        if !self.chi0.is_finite() || !self.eps.is_finite() {
            return Err(Error::InvalidArgument("χ₀ and ε must be finite".into()));
        }
        let half = grid.half_extent();
        for (index, s) in self.shapes.iter().enumerate() {
            let size_ok = match s {
                Shape::Gaussian { sigma, .. } => *sigma > 0.0,
                Shape::Sphere { radius, .. } => *radius > 0.0,
                Shape::Box { half_widths, .. } => half_widths.iter().all(|w| *w > 0.0),
            };
            if !size_ok {
                return Err(Error::Shape(format!("shape {index} has a non-positive size")));
            }
            if s.values().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::Shape(format!("shape {index} has non-finite values")));
            }
            let c = s.center();
            let e = s.half_extent();
            if (0..3).any(|i| (c[i].abs() + e[i]) > half[i] * (1.0 + 1e-12)) {
                return Err(Error::ShapeOutsideDomain { index });
            }
        }
        Ok(())
    }

    /// `ψ` at every voxel centre.
    pub fn rasterize<T: Real>(&self) -> Result<OrthotropicSusceptibility<T>> {
        self.validate()?;
        let grid = VoxelGrid::<T>::from_spec(&self.grid)?;
        let mut sus = OrthotropicSusceptibility::zeros(grid, lit(self.chi0), lit(self.eps));
        for idx in 0..grid.len() {
            let x = grid.center(idx);
            let x64 = [0, 1, 2].map(|d| x[d].to_f64().unwrap_or(f64::NAN));
            for s in &self.shapes {
                let w = s.profile(&x64);
                if w == 0.0 {
                    continue;
                }
                for (c, v) in s.values().iter().enumerate() {
                    sus.psi[c][idx] += Complex::new(lit::<T>(v.re * w), lit::<T>(v.im * w));
                }
            }
        }
        Ok(sus)
    }

    /// Continuum transform of each component at `k`.
    pub fn analytic_transform<T: Real>(&self, k: &Vec3<T>) -> [Complex<T>; 4] {
        let mut out = [Complex::zero(); 4];
        for s in &self.shapes {
            let f = s.profile_transform(k);
            for (c, v) in s.values().iter().enumerate() {
                out[c] += f * Complex::new(lit::<T>(v.re), lit::<T>(v.im));
            }
        }
        out
    }

    /// Centred Gaussian with the given component amplitudes.
    pub fn gaussian(grid: GridSpec, chi0: f64, eps: f64, sigma: f64, amplitudes: [f64; 4]) -> Self {
        Self {
            grid,
            chi0,
            eps,
            shapes: vec![Shape::Gaussian {
                center: [0.0; 3],
                sigma,
                values: amplitudes.map(|a| Complex::new(a, 0.0)),
            }],
        }
    }
}
