//! Detector directions on the unit sphere and transverse projections.

use crate::error::{Error, Result};
use crate::math::vec3::{norm, rcross, rdot, CVec3, Vec3};
use crate::scalar::{lit, Real};

/// Unit vector `ϑ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction<T> {
    theta: Vec3<T>,
}

impl<T: Real> Direction<T> {
    /// Accepts `theta` only if `| |theta| − 1 | ≤ 1e-12`.
    pub fn new(theta: Vec3<T>) -> Result<Self> {
        let n = norm(&theta);
        let tol = lit::<T>(1e-12).max(T::epsilon() * lit(8.0));
        if !((n - T::one()).abs() <= tol) {
            return Err(Error::Direction(to_f64(&theta), "not a unit vector"));
        }
        Ok(Self { theta })
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(v: Vec3<T>) -> Result<Self> {
        let n = norm(&v);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Direction(to_f64(&v), "cannot normalize"));
        }
        Ok(Self {
            theta: [v[0] / n, v[1] / n, v[2] / n],
        })
    }

    pub fn theta(&self) -> Vec3<T> {
        self.theta
    }

    /// `ϑ ∈ 𝕊²₊`: `ϑ₃ > 0`.
    pub fn in_upper_hemisphere(&self) -> bool {
        self.theta[2] > T::zero()
    }

    /// `ϑ ∈ 𝕊²∗`: `ϑ₃ > 0` and `ϑ₁ ≠ ϑ₂`.
    pub fn in_admissible_set(&self) -> bool {
        self.in_upper_hemisphere() && self.theta[0] != self.theta[1]
    }

    /// Rejects directions with `|ϑ₁ − ϑ₂| < tie` or `ϑ₃ < pole`.
    pub fn check_admissible(&self, tie: T, pole: T) -> Result<()> {
        if !(self.theta[2] > T::zero()) || self.theta[2] < pole {
            return Err(Error::Excluded {
                theta: to_f64(&self.theta),
                reason: "third component below threshold",
            });
        }
        if (self.theta[0] - self.theta[1]).abs() < tie || self.theta[0] == self.theta[1] {
            return Err(Error::Excluded {
                theta: to_f64(&self.theta),
                reason: "first and second components tie",
            });
        }
        Ok(())
    }
}

pub(crate) fn to_f64<T: Real>(v: &Vec3<T>) -> [f64; 3] {
    [
        v[0].to_f64().unwrap_or(f64::NAN),
        v[1].to_f64().unwrap_or(f64::NAN),
        v[2].to_f64().unwrap_or(f64::NAN),
    ]
}

/// `P_ϑ u = u − ⟨ϑ,u⟩ϑ`.
pub fn project_transverse<T: Real>(theta: &Direction<T>, u: &CVec3<T>) -> CVec3<T> {
    let t = theta.theta();
    let s = rdot(&t, u);
    [u[0] - s * t[0], u[1] - s * t[1], u[2] - s * t[2]]
}

/// `ϑ × (ϑ × u)`.
pub fn double_cross<T: Real>(theta: &Direction<T>, u: &CVec3<T>) -> CVec3<T> {
    let t = theta.theta();
    rcross(&t, &rcross(&t, u))
}

/// `n` Fibonacci-lattice points on the cap `ϑ₃ ∈ [z_min, 1]`.
pub fn fibonacci_cap<T: Real>(n: usize, z_min: T) -> Vec<Direction<T>> {
    let golden = T::PI() * (lit::<T>(3.0) - lit::<T>(5.0).sqrt());
    let nt = lit::<T>(n as f64);
    (0..n)
        .map(|i| {
            let fi = lit::<T>(i as f64);
            let z = T::one() - (T::one() - z_min) * (fi + lit(0.5)) / nt;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let phi = fi * golden;
            Direction {
                theta: [r * phi.cos(), r * phi.sin(), z],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec3::to_complex;
    use num_complex::Complex;

    #[test]
    fn axis_projection() {
        let e3 = Direction::new([0.0, 0.0, 1.0]).unwrap();
        let u = to_complex(&[1.0, 0.0, 0.0]);
        assert_eq!(project_transverse(&e3, &u), u);
        let dc = double_cross(&e3, &u);
        assert_eq!(dc[0], Complex::new(-1.0, 0.0));
    }

    #[test]
    fn parallel_vector_projects_to_zero() {
        let d = Direction::normalized([1.0, 2.0, 2.0]).unwrap();
        let u = to_complex(&d.theta());
        let p = project_transverse(&d, &u);
        assert!(p.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn membership() {
        let d = Direction::normalized([0.5, 0.5, 1.0]).unwrap();
        assert!(d.in_upper_hemisphere());
        assert!(!d.in_admissible_set());
        assert!(d.check_admissible(1e-3, 0.0).is_err());
        assert!(Direction::new([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn cap_points_are_unit_and_in_range() {
        let pts = fibonacci_cap(50, 0.3_f64);
        for p in &pts {
            assert!((norm(&p.theta()) - 1.0).abs() < 1e-14);
            assert!(p.theta()[2] >= 0.3);
        }
    }
}
