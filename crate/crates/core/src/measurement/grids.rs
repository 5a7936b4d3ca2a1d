//! Frequency and mirror-position grids of the measurement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Angular frequencies `ω_j = center + j·step`, `j = −half..=half`, with
/// rectangle weights `step`. A single spectral line has `half = 0` and
/// weight 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub center: f64,
    pub step: f64,
    pub half: usize,
}

impl OmegaGrid {
    pub fn uniform(center: f64, step: f64, half: usize) -> Result<Self> {
        let g = Self { center, step, half };
        g.validate()?;
        Ok(g)
    }

    /// One line at `center`, integrated with unit weight.
    pub fn line(center: f64) -> Result<Self> {
        Self::uniform(center, center, 0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center > 0.0) || !(self.step > 0.0) {
            return Err(Error::InvalidArgument("frequency grid needs positive centre and step".into()));
        }
        if self.center - self.half as f64 * self.step <= 0.0 {
            return Err(Error::Sampling {
                constraint: "positive frequencies",
                detail: format!("lowest frequency {} ≤ 0", self.omega_at::<f64>(0)),
            });
        }
        Ok(())
    }

    pub fn is_line(&self) -> bool {
        self.half == 0
    }

    pub fn len(&self) -> usize {
        2 * self.half + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega_at<T: Real>(&self, n: usize) -> T {
        lit::<T>(self.center) + lit::<T>(n as f64 - self.half as f64) * lit::<T>(self.step)
    }

    pub fn omegas<T: Real>(&self) -> Vec<T> {
        (0..self.len()).map(|n| self.omega_at(n)).collect()
    }

    pub fn weight<T: Real>(&self) -> T {
        if self.is_line() {
            T::one()
        } else {
            lit(self.step)
        }
    }

    pub fn max_omega(&self) -> f64 {
        self.center + self.half as f64 * self.step
    }

    /// Index of the grid frequency matching `omega` to relative `1e-9`.
    pub fn index_of<T: Real>(&self, omega: T) -> Option<usize> {
        let w = omega.to_f64()?;
        (0..self.len()).find(|&n| (self.omega_at::<f64>(n) - w).abs() <= 1e-9 * w.abs().max(1.0))
    }

    /// `ω_min / step`; extraction is exact when this is an integer.
    pub fn harmonic_offset(&self) -> f64 {
        self.omega_at::<f64>(0) / self.step
    }
}

/// Mirror positions `l_i = center + (i − (count−1)/2)·step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LGrid {
    pub center: f64,
    pub step: f64,
    pub count: usize,
}

impl LGrid {
    /// `count` points spanning exactly one period `πc/Δω` of the frequency beat.
    pub fn one_period(omegas: &OmegaGrid, c: f64, count: usize, center: f64) -> Result<Self> {
        let period = std::f64::consts::PI * c / omegas.step;
        let g = Self {
            center,
            step: period / count as f64,
            count,
        };
        g.check(omegas, c)?;
        Ok(g)
    }

    /// Nyquist bound `Δl ≤ πc/(2ω_max)` and the aliasing bound `Δω·span/c ≤ π`.
    pub fn check(&self, omegas: &OmegaGrid, c: f64) -> Result<()> {
        if self.count < 2 || !(self.step > 0.0) {
            return Err(Error::InvalidArgument("mirror grid needs ≥ 2 points and a positive step".into()));
        }
        let nyquist = std::f64::consts::PI * c / (2.0 * omegas.max_omega());
        if self.step > nyquist * (1.0 + 1e-12) {
            return Err(Error::Sampling {
                constraint: "Nyquist bound on the mirror step",
                detail: format!("Δl = {:e} > πc/(2ω_max) = {:e}", self.step, nyquist),
            });
        }
        let beat = omegas.step * self.span() / c;
        if beat > std::f64::consts::PI * (1.0 + 1e-12) {
            return Err(Error::Sampling {
                constraint: "frequency resolution",
                detail: format!("Δω·(l-span)/c = {beat:.6} exceeds π; refine the frequency grid"),
            });
        }
        Ok(())
    }

    /// `count · step`.
    pub fn span(&self) -> f64 {
        self.count as f64 * self.step
    }

    pub fn value<T: Real>(&self, i: usize) -> T {
        lit::<T>(self.center) + (lit::<T>(i as f64) - lit::<T>((self.count - 1) as f64) / lit(2.0)) * lit::<T>(self.step)
    }

    pub fn values<T: Real>(&self) -> Vec<T> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Centre of the mirror window for detector radius `ρ` and direction `ϑ₃`:
/// where the phase `k(ρ + 2l − ρϑ₃)` is stationary.
pub fn stationary_mirror_position(rho: f64, theta3: f64) -> f64 {
    rho * (theta3 - 1.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_grid_layout() {
        let g = OmegaGrid::uniform(10.0, 0.5, 2).unwrap();
        assert_eq!(g.omegas::<f64>(), vec![9.0, 9.5, 10.0, 10.5, 11.0]);
        assert_eq!(g.index_of(10.5_f64), Some(3));
        assert_eq!(g.index_of(10.25_f64), None);
        assert_eq!(g.harmonic_offset(), 18.0);
        assert!(OmegaGrid::uniform(1.0, 0.5, 2).is_err());
    }

    #[test]
    fn l_grid_spans_one_period() {
        let g = OmegaGrid::uniform(40.0, 1.0, 8).unwrap();
        let l = LGrid::one_period(&g, 1.0, 128, -0.5).unwrap();
        assert!((l.span() - std::f64::consts::PI).abs() < 1e-14);
        let v: Vec<f64> = l.values();
        assert!(((v[0] + v[127]) / 2.0 + 0.5).abs() < 1e-14);
        assert!(matches!(LGrid::one_period(&g, 1.0, 64, 0.0), Err(Error::Sampling { .. })));
    }

    #[test]
    fn too_long_window_is_aliased() {
        let g = OmegaGrid::uniform(40.0, 1.0, 8).unwrap();
        let l = LGrid {
            center: 0.0,
            step: 0.02,
            count: 200,
        };
        assert!(matches!(l.check(&g, 1.0), Err(Error::Sampling { .. })));
    }
}
