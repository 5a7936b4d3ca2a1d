//! Orthotropic susceptibility `χ̂ = χ₀B + εψ` on a voxel grid.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forward::grid::VoxelGrid;
use crate::math::vec3::{mzero, CMat3};
use crate::scalar::{re, Real};

/// Component order of the stored fields.
pub const COMPONENTS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 1), (2, 2)];
pub const COMPONENT_NAMES: [&str; 4] = ["psi11", "psi12", "psi22", "psi33"];

/// Background pattern `B` with `χ₀ B` the homogeneous part.
pub fn background_pattern<T: Real>() -> CMat3<T> {
    let one = re(T::one());
    let mut b = mzero();
    b[0][0] = one;
    b[0][1] = one;
    b[1][0] = one;
    b[1][1] = one;
    b[2][2] = one;
    b
}

/// Symmetric matrix with the orthotropic zero pattern from its four entries.
pub fn orthotropic<T: Real>(c: [Complex<T>; 4]) -> CMat3<T> {
    let mut m = mzero();
    m[0][0] = c[0];
    m[0][1] = c[1];
    m[1][0] = c[1];
    m[1][1] = c[2];
    m[2][2] = c[3];
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthotropicSusceptibility<T> {
    pub grid: VoxelGrid<T>,
    pub chi0: T,
    pub eps: T,
    /// `ψ₁₁, ψ₁₂, ψ₂₂, ψ₃₃` per voxel.
    pub psi: [Vec<Complex<T>>; 4],
}

impl<T: Real> OrthotropicSusceptibility<T> {
    pub fn new(grid: VoxelGrid<T>, chi0: T, eps: T, psi: [Vec<Complex<T>>; 4]) -> Result<Self> {
        for p in &psi {
            if p.len() != grid.len() {
                return Err(Error::GridMismatch {
                    expected: grid.len(),
                    got: p.len(),
                });
            }
            if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite susceptibility value".into()));
            }
        }
        Ok(Self { grid, chi0, eps, psi })
    }

    pub fn zeros(grid: VoxelGrid<T>, chi0: T, eps: T) -> Self {
        let z = vec![Complex::zero(); grid.len()];
        Self {
            grid,
            chi0,
            eps,
            psi: [z.clone(), z.clone(), z.clone(), z],
        }
    }

    /// Same medium with `ε = 0`.
    pub fn background(&self) -> Self {
        let mut out = self.clone();
        out.eps = T::zero();
        out
    }

    /// Medium with every susceptibility scaled by `s`.
    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        out.chi0 = out.chi0 * s;
        out.eps = out.eps * s;
        out
    }

    pub fn psi_matrix(&self, idx: usize) -> CMat3<T> {
        orthotropic([self.psi[0][idx], self.psi[1][idx], self.psi[2][idx], self.psi[3][idx]])
    }

    /// `χ̂` at voxel `idx`.
    pub fn chi_hat(&self, idx: usize) -> CMat3<T> {
        let b = background_pattern::<T>();
        let p = self.psi_matrix(idx);
        let mut m = mzero();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = b[i][j] * self.chi0 + p[i][j] * self.eps;
            }
        }
        m
    }

    pub fn chi_field(&self) -> Vec<CMat3<T>> {
        (0..self.grid.len()).map(|i| self.chi_hat(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_pattern() {
        let grid = VoxelGrid::cube(2, 0.1_f64).unwrap();
        let mut s = OrthotropicSusceptibility::zeros(grid, 0.05, 0.01);
        s.psi[1][3] = Complex::new(2.0, 1.0);
        let m = s.chi_hat(3);
        assert_eq!(m[0][2], Complex::zero());
        assert_eq!(m[2][1], Complex::zero());
        assert_eq!(m[0][1], m[1][0]);
        assert!((m[0][1] - Complex::new(0.05 + 0.02, 0.01)).norm() < 1e-16);
    }

    #[test]
    fn wrong_length_rejected() {
        let grid = VoxelGrid::cube(2, 0.1_f64).unwrap();
        let z = vec![Complex::zero(); 3];
        assert!(OrthotropicSusceptibility::new(grid, 0.0, 1.0, [z.clone(), z.clone(), z.clone(), z]).is_err());
    }
}
