//! Quarter-wave plates and the two interferometer arms.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::vec3::{adjoint, cscale, midentity, mmul, mvec, mzero, to_complex, CMat3, CVec3, Vec3};
use crate::scalar::{cis, imag_unit, lit, re, Real};

/// Plate angle of the reference arm (passed twice).
pub const REFERENCE_PLATE_ANGLE: f64 = std::f64::consts::FRAC_PI_8;
/// Plate angle of the sample arm.
pub const SAMPLE_PLATE_ANGLE: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesMatrix<T> {
    pub m: CMat3<T>,
}

impl<T: Real> JonesMatrix<T> {
    pub fn apply(&self, v: &CVec3<T>) -> CVec3<T> {
        mvec(&self.m, v)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: mmul(&self.m, &other.m),
        }
    }

    /// Largest entry of `m mᴴ − 𝟙`.
    pub fn unitarity_defect(&self) -> T {
        let p = mmul(&self.m, &adjoint(&self.m));
        let id = midentity::<T>();
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((p[i][j] - id[i][j]).norm());
            }
        }
        worst
    }
}

fn rotation<T: Real>(phi: T) -> CMat3<T> {
    let (s, c) = phi.sin_cos();
    let mut m = mzero();
    m[0][0] = re(c);
    m[0][1] = re(-s);
    m[1][0] = re(s);
    m[1][1] = re(c);
    m[2][2] = re(T::one());
    m
}

/// `J(φ) = R(φ) diag(1, −i, 1) R(−φ)`: quarter-wave plate with fast axis at `φ`.
pub fn qwp_matrix<T: Real>(phi: T) -> JonesMatrix<T> {
    let mut d = midentity::<T>();
    d[1][1] = -imag_unit::<T>();
    JonesMatrix {
        m: mmul(&mmul(&rotation(phi), &d), &rotation(-phi)),
    }
}

/// Incident polarization and the plate angles of both arms, with the derived
/// reference polarization `η = J²(φ₁)q` and sample polarization `p = J(φ₂)q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationSetup<T> {
    pub q: Vec3<T>,
    pub phi1: T,
    pub phi2: T,
    pub eta: CVec3<T>,
    pub p: CVec3<T>,
}

/// Serializable form of a [`PolarizationSetup`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetupSpec {
    pub q: [f64; 3],
    pub phi1: f64,
    pub phi2: f64,
}

impl<T: Real> PolarizationSetup<T> {
    pub fn new(q: Vec3<T>, phi1: T, phi2: T) -> Result<Self> {
        if q[2] != T::zero() {
            return Err(Error::InvalidArgument("incident polarization must have q₃ = 0".into()));
        }
        let qc = to_complex(&q);
        let half = qwp_matrix(phi1);
        let eta = half.compose(&half).apply(&qc);
        let p = qwp_matrix(phi2).apply(&qc);
        Ok(Self { q, phi1, phi2, eta, p })
    }

    /// Setup `k ∈ {1, 2}` of the standard pair: `q = e_k`, `φ₁ = π/8`, `φ₂ = π/4`.
    pub fn standard(k: usize) -> Self {
        let q = match k {
            1 => [T::one(), T::zero(), T::zero()],
            2 => [T::zero(), T::one(), T::zero()],
            _ => panic!("standard setups are numbered 1 and 2"),
        };
        Self::new(q, lit(REFERENCE_PLATE_ANGLE), lit(SAMPLE_PLATE_ANGLE)).expect("q₃ = 0")
    }

    /// True if the plate angles are the standard pair within `1e-12`.
    pub fn has_standard_angles(&self) -> bool {
        let tol = lit::<T>(1e-12);
        (self.phi1 - lit(REFERENCE_PLATE_ANGLE)).abs() <= tol && (self.phi2 - lit(SAMPLE_PLATE_ANGLE)).abs() <= tol
    }

    pub fn spec(&self) -> SetupSpec {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        SetupSpec {
            q: [f(self.q[0]), f(self.q[1]), f(self.q[2])],
            phi1: f(self.phi1),
            phi2: f(self.phi2),
        }
    }

    pub fn from_spec(spec: &SetupSpec) -> Result<Self> {
        Self::new(
            [lit(spec.q[0]), lit(spec.q[1]), lit(spec.q[2])],
            lit(spec.phi1),
            lit(spec.phi2),
        )
    }

    /// `J²(φ₁) v e^{2ik(x₃ − l)}` for wavenumber `k = ω/c > 0`.
    pub fn reference_arm(&self, v: &CVec3<T>, k: T, x3: T, l: T) -> Result<CVec3<T>> {
        if !(k > T::zero()) {
            return Err(Error::ZeroFrequency("reference arm is defined for ω > 0"));
        }
        let half = qwp_matrix(self.phi1);
        let out = half.compose(&half).apply(v);
        Ok(cscale(&out, cis(lit::<T>(2.0) * k * (x3 - l))))
    }

    /// `J(φ₂) v` for `ω > 0`.
    pub fn sample_arm(&self, v: &CVec3<T>, k: T) -> Result<CVec3<T>> {
        if !(k > T::zero()) {
            return Err(Error::ZeroFrequency("sample arm is defined for ω > 0"));
        }
        Ok(qwp_matrix(self.phi2).apply(v))
    }
}

/// Narrow-band incident field `(1/π) Re{p e^{−iν(x₃/c + t)}}`.
pub fn time_domain_incident<T: Real>(p: &CVec3<T>, nu: T, c: T, t: T, x3: T) -> Vec3<T> {
    let ph = cis(-nu * (x3 / c + t));
    let f = |z: Complex<T>| (z * ph).re / T::PI();
    [f(p[0]), f(p[1]), f(p[2])]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn zero_angle_is_diagonal() {
        let j = qwp_matrix(0.0_f64);
        assert_eq!(j.m[0][0], c(1.0, 0.0));
        assert!((j.m[1][1] - c(0.0, -1.0)).norm() < 1e-16);
        assert_eq!(j.m[0][1], c(0.0, 0.0));
    }

    #[test]
    fn standard_vectors() {
        let s1 = PolarizationSetup::<f64>::standard(1);
        let s2 = PolarizationSetup::<f64>::standard(2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [
            (s1.p, [c(0.5, -0.5), c(0.5, 0.5), c(0.0, 0.0)]),
            (s2.p, [c(0.5, 0.5), c(0.5, -0.5), c(0.0, 0.0)]),
            (s1.eta, [c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]),
            (s2.eta, [c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]),
        ];
        for (got, exp) in want {
            for i in 0..3 {
                assert!((got[i] - exp[i]).norm() <= 1e-14, "{got:?} vs {exp:?}");
            }
        }
    }

    #[test]
    fn reference_phase() {
        let s = PolarizationSetup::<f64>::standard(1);
        let v = to_complex(&[1.0, 0.0, 0.0]);
        let at = s.reference_arm(&v, 3.0, 0.4, 0.4).unwrap();
        for i in 0..3 {
            assert!((at[i] - s.eta[i]).norm() < 1e-15);
        }
        assert!(s.reference_arm(&v, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn circular_incident_field() {
        let s = PolarizationSetup::<f64>::standard(1);
        let e = time_domain_incident(&s.p, 2.0, 1.0, 0.0, 0.0);
        let pi = std::f64::consts::PI;
        assert!((e[0] - 1.0 / (2.0 * pi)).abs() < 1e-15);
        assert!((e[1] - 1.0 / (2.0 * pi)).abs() < 1e-15);
    }
}
