//! Voxel grids and the self-cell treatment of the singular kernel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::vec3::{midentity, mscale, CMat3, Vec3};
use crate::scalar::{lit, re, Real};

/// Axis-aligned box of `n[0]×n[1]×n[2]` cubic voxels of side `h`, centred at the origin.
/// Voxels are stored row-major with the last axis fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VoxelGrid<T> {
    pub n: [usize; 3],
    pub h: T,
}

/// Serializable form of a [`VoxelGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: [usize; 3],
    pub h: f64,
}

impl<T: Real> VoxelGrid<T> {
    pub fn new(n: [usize; 3], h: T) -> Result<Self> {
        if n.iter().any(|&m| m == 0) {
            return Err(Error::InvalidArgument(format!("grid dimensions {n:?} must be positive")));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidArgument("voxel size must be positive".into()));
        }
        Ok(Self { n, h })
    }

    pub fn cube(n: usize, h: T) -> Result<Self> {
        Self::new([n, n, n], h)
    }

    pub fn from_spec(spec: &GridSpec) -> Result<Self> {
        Self::new(spec.n, lit(spec.h))
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            n: self.n,
            h: self.h.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight `h³`.
    pub fn weight(&self) -> T {
        self.h * self.h * self.h
    }

    pub fn index(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n[1] + i[1]) * self.n[2] + i[2]
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let i2 = idx % self.n[2];
        let r = idx / self.n[2];
        [r / self.n[1], r % self.n[1], i2]
    }

    /// Coordinate of voxel `i` along `axis`.
    pub fn coord(&self, axis: usize, i: usize) -> T {
        (lit::<T>(i as f64) - lit::<T>((self.n[axis] - 1) as f64) / lit(2.0)) * self.h
    }

    pub fn center(&self, idx: usize) -> Vec3<T> {
        let m = self.multi_index(idx);
        [self.coord(0, m[0]), self.coord(1, m[1]), self.coord(2, m[2])]
    }

    pub fn centers(&self) -> Vec<Vec3<T>> {
        (0..self.len()).map(|i| self.center(i)).collect()
    }

    /// Half-widths of the box `Ω`.
    pub fn half_extent(&self) -> Vec3<T> {
        let half = |a: usize| lit::<T>(self.n[a] as f64) * self.h / lit(2.0);
        [half(0), half(1), half(2)]
    }

    pub fn contains(&self, x: &Vec3<T>) -> bool {
        let e = self.half_extent();
        (0..3).all(|a| x[a].abs() <= e[a])
    }
}

/// Replacement for the kernel on the diagonal `y = z`, already integrated over
/// the cell, so that the discrete operator is `Σ_z A(y,z) g(z)` with
/// `A(y,z) = 𝐆(y−z) h³` off the diagonal.
pub trait SelfCellRule<T: Real>: Send + Sync {
    fn diagonal(&self, k: T, h: T) -> CMat3<T>;
    fn name(&self) -> &'static str;
}

/// Equivalent-volume sphere of radius `R = (3h³/4π)^{1/3}`: the scalar kernel
/// contributes `∫_{|y|<R} G(0,y) dy = R²/2`, the `k^{−2}∇div` part the static
/// depolarization `−1/(3k²)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct EquivalentSphere;

impl EquivalentSphere {
    pub fn radius<T: Real>(h: T) -> T {
        (lit::<T>(3.0) * h * h * h / (lit::<T>(4.0) * T::PI())).cbrt()
    }
}

impl<T: Real> SelfCellRule<T> for EquivalentSphere {
    fn diagonal(&self, k: T, h: T) -> CMat3<T> {
        let r = Self::radius(h);
        let v = r * r / lit(2.0) - T::one() / (lit::<T>(3.0) * k * k);
        mscale(&midentity(), re(v))
    }

    fn name(&self) -> &'static str {
        "equivalent_sphere"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_are_symmetric() {
        let g = VoxelGrid::cube(4, 0.5_f64).unwrap();
        assert_eq!(g.center(0), [-0.75, -0.75, -0.75]);
        assert_eq!(g.center(g.len() - 1), [0.75, 0.75, 0.75]);
        assert_eq!(g.multi_index(g.index([1, 2, 3])), [1, 2, 3]);
    }

    #[test]
    fn sphere_has_voxel_volume() {
        let h = 0.1_f64;
        let r = EquivalentSphere::radius(h);
        let vol = 4.0 / 3.0 * std::f64::consts::PI * r.powi(3);
        assert!((vol - h.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn invalid_grids() {
        assert!(VoxelGrid::new([0, 1, 1], 1.0_f64).is_err());
        assert!(VoxelGrid::new([1, 1, 1], 0.0_f64).is_err());
    }
}
