//! Scalar and dyadic free-space Green functions, parameterized by the
//! wavenumber `k = ω/c`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::math::vec3::{norm, CMat3, Vec3};
use crate::scalar::{cis, lit, re, Real};

/// `e^{ik|x|} / (4π|x|)`.
pub fn scalar_green<T: Real>(k: T, x: &Vec3<T>) -> Result<Complex<T>> {
    let r = norm(x);
    if !(r > T::zero()) {
        return Err(Error::Singularity);
    }
    Ok(cis(k * r) / (lit::<T>(4.0) * T::PI() * r))
}

/// Coefficients `(a, b)` with `𝐆 = a 𝟙 + b x̂x̂ᵀ` at distance `r`.
pub(crate) fn dyadic_coefficients<T: Real>(k: T, r: T) -> (Complex<T>, Complex<T>) {
    let g = cis(k * r) / (lit::<T>(4.0) * T::PI() * r);
    let kr = k * r;
    let inv = T::one() / kr;
    let inv2 = inv * inv;
    let a = g * Complex::new(T::one() - inv2, inv);
    let b = g * Complex::new(lit::<T>(3.0) * inv2 - T::one(), -lit::<T>(3.0) * inv);
    (a, b)
}

/// `𝐆 = G𝟙 + k^{−2}∇div(G𝟙)` in closed form.
pub fn dyadic_green<T: Real>(k: T, x: &Vec3<T>) -> Result<CMat3<T>> {
    if k == T::zero() {
        return Err(Error::ZeroFrequency("dyadic Green function"));
    }
    let r = norm(x);
    if !(r > T::zero()) {
        return Err(Error::Singularity);
    }
    let (a, b) = dyadic_coefficients(k, r);
    let xh = [x[0] / r, x[1] / r, x[2] / r];
    let mut m = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = b * (xh[i] * xh[j]);
        }
        m[i][i] += a;
    }
    Ok(m)
}

/// `𝐆(x) a` for the far-field check: `(e^{ikr}/4πr)(𝟙 − x̂x̂ᵀ) a`.
pub fn transverse_far_limit<T: Real>(k: T, x: &Vec3<T>, a: &[Complex<T>; 3]) -> Result<[Complex<T>; 3]> {
    let r = norm(x);
    if !(r > T::zero()) {
        return Err(Error::Singularity);
    }
    let g = cis(k * r) / (lit::<T>(4.0) * T::PI() * r);
    let xh = [x[0] / r, x[1] / r, x[2] / r];
    let proj = a[0] * xh[0] + a[1] * xh[1] + a[2] * xh[2];
    Ok([
        g * (a[0] - proj * xh[0]),
        g * (a[1] - proj * xh[1]),
        g * (a[2] - proj * xh[2]),
    ])
}

/// Value of `∫_{|y|<R} e^{ik|y|}/(4π|y|) dy` for the static part only:
/// `R²/2`, the equivalent-sphere average of the scalar kernel at `k = 0`.
pub fn sphere_average_static<T: Real>(radius: T) -> Complex<T> {
    re(radius * radius / lit::<T>(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn static_value_at_unit_distance() {
        let g = scalar_green(0.0, &[0.0, 1.0, 0.0]).unwrap();
        assert!((g.re - 1.0 / (4.0 * PI)).abs() < 1e-16 && g.im == 0.0);
    }

    #[test]
    fn unit_wavenumber_on_axis() {
        let g = scalar_green(1.0, &[1.0, 0.0, 0.0]).unwrap();
        let want = cis(1.0) / (4.0 * PI);
        assert!((g - want).norm() < 1e-16);
    }

    #[test]
    fn origin_is_rejected() {
        assert!(matches!(scalar_green(1.0, &[0.0; 3]), Err(Error::Singularity)));
        assert!(matches!(dyadic_green(1.0, &[0.0; 3]), Err(Error::Singularity)));
        assert!(matches!(dyadic_green(0.0, &[1.0, 0.0, 0.0]), Err(Error::ZeroFrequency(_))));
    }

    #[test]
    fn dyadic_is_symmetric_and_even() {
        let x = [0.3, -0.7, 1.1];
        let m = dyadic_green(2.0, &x).unwrap();
        let mneg = dyadic_green(2.0, &[-0.3, 0.7, -1.1]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i]);
                assert!((m[i][j] - mneg[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_precision_evaluates() {
        let g = scalar_green(1.0f32, &[1.0, 0.0, 0.0]).unwrap();
        assert!((g.norm() - 1.0 / (4.0 * std::f32::consts::PI)).abs() < 1e-7);
    }
}
