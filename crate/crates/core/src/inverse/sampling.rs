//! Reciprocal-space sample sets `v = k(ϑ + e₃)` with the admissibility filter.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::direction::{to_f64, Direction};
use crate::math::vec3::Vec3;
use crate::measurement::KSpaceSample;
use crate::scalar::{lit, Real};

/// Exclusion thresholds for detector directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// Minimum `|ϑ₁ − ϑ₂|`.
    pub tie: f64,
    /// Minimum `ϑ₃`.
    pub pole: f64,
}

impl Default for Admissibility {
    fn default() -> Self {
        Self { tie: 1e-3, pole: 0.3 }
    }
}

/// One node of the reciprocal grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint<T> {
    pub k: T,
    pub theta: Direction<T>,
    pub v: Vec3<T>,
}

impl<T: Real> SamplePoint<T> {
    pub fn new(k: T, theta: Direction<T>) -> Self {
        let t = theta.theta();
        Self {
            k,
            theta,
            v: [k * t[0], k * t[1], k * (t[2] + T::one())],
        }
    }
}

/// Retained sample points and the reasons others were dropped.
#[derive(Clone, Debug)]
pub struct SampleSet<T> {
    pub points: Vec<SamplePoint<T>>,
    pub excluded: Vec<([f64; 3], String)>,
}

impl<T: Real> SampleSet<T> {
    /// Tensor product of wavenumbers and directions, wavenumber-major.
    pub fn tensor(ks: &[T], thetas: &[Direction<T>], adm: &Admissibility) -> Result<Self> {
        let mut points = Vec::new();
        let mut excluded = Vec::new();
        for &k in ks {
            if !(k > T::zero()) {
                return Err(Error::ZeroFrequency("sample wavenumbers must be positive"));
            }
            for th in thetas {
                match th.check_admissible(lit(adm.tie), lit(adm.pole)) {
                    Ok(()) => points.push(SamplePoint::new(k, *th)),
                    Err(e) => excluded.push((to_f64(&th.theta()), e.to_string())),
                }
            }
        }
        if !excluded.is_empty() {
            debug!("excluded {} of {} sample points", excluded.len(), excluded.len() + points.len());
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("every sample point was excluded"));
        }
        Ok(Self { points, excluded })
    }

    /// Sample points of measured data, keeping only admissible ones. The
    /// returned index list maps retained points to `samples`.
    pub fn from_measurements(samples: &[KSpaceSample<T>], adm: &Admissibility) -> Result<(Self, Vec<usize>)> {
        let mut points = Vec::new();
        let mut excluded = Vec::new();
        let mut kept = Vec::new();
        for (i, s) in samples.iter().enumerate() {
            match s.theta.check_admissible(lit(adm.tie), lit(adm.pole)) {
                Ok(()) => {
                    points.push(SamplePoint::new(s.k, s.theta));
                    kept.push(i);
                }
                Err(e) => excluded.push((to_f64(&s.theta.theta()), e.to_string())),
            }
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("every sample point was excluded"));
        }
        Ok((Self { points, excluded }, kept))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn excluded_fraction(&self) -> f64 {
        let total = self.points.len() + self.excluded.len();
        self.excluded.len() as f64 / total as f64
    }

    /// Subset of points whose wavenumber equals `k`.
    pub fn with_wavenumber(&self, k: T) -> (Self, Vec<usize>) {
        let tol = lit::<T>(1e-12) * k.abs().max(T::one());
        let idx: Vec<usize> = (0..self.len()).filter(|&i| (self.points[i].k - k).abs() <= tol).collect();
        (
            Self {
                points: idx.iter().map(|&i| self.points[i]).collect(),
                excluded: Vec::new(),
            },
            idx,
        )
    }

    /// Distinct wavenumbers in order of first appearance.
    pub fn wavenumbers(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for p in &self.points {
            if !out.iter().any(|&k| (k - p.k).abs() <= lit::<T>(1e-12) * p.k.abs().max(T::one())) {
                out.push(p.k);
            }
        }
        out
    }
}
