//! Samples of the measured data in reciprocal space.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::math::direction::Direction;
use crate::math::vec3::Vec3;
use crate::scalar::Real;

/// `m̃` for both setups at one `(ω, ϑ)`, attached to the reciprocal point
/// `v = k(ϑ + e₃)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KSpaceSample<T> {
    pub omega: T,
    pub k: T,
    pub theta: Direction<T>,
    pub v: Vec3<T>,
    /// `m[s][j]`: setup `s`, component `j`.
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> KSpaceSample<T> {
    pub fn new(omega: T, c: T, theta: Direction<T>, m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        if !(omega > T::zero()) || !(c > T::zero()) {
            return Err(Error::ZeroFrequency("reciprocal samples need ω > 0 and c > 0"));
        }
        let k = omega / c;
        let t = theta.theta();
        Ok(Self {
            omega,
            k,
            theta,
            v: [k * t[0], k * t[1], k * (t[2] + T::one())],
            m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_point() {
        let theta = Direction::new([0.6_f64, 0.0, 0.8]).unwrap();
        let s = KSpaceSample::new(2.0_f64, 0.5, theta, [[Complex::new(1.0, 0.0); 2]; 2]).unwrap();
        assert!((s.v[0] - 2.4).abs() < 1e-15 && (s.v[2] - 7.2).abs() < 1e-14);
        assert!(KSpaceSample::new(0.0, 1.0, theta, s.m).is_err());
    }
}
