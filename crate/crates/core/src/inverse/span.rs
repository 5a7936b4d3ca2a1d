//! Data for an arbitrary incident polarization `q = c₁e₁ + c₂e₂` is a fixed
//! quadratic combination of the data of the two standard setups.

use num_complex::Complex;

use crate::error::Result;
use crate::jones::PolarizationSetup;
use crate::math::direction::{double_cross, Direction};
use crate::math::vec3::{mvec, CMat3};
use crate::scalar::{lit, Real};

/// `((c₁²+c₁c₂)m̃⁽¹⁾₁ + (c₂²+c₁c₂)m̃⁽²⁾₁, (c₁²−c₁c₂)m̃⁽¹⁾₂ + (c₂²−c₁c₂)m̃⁽²⁾₂)`.
pub fn combine_polarizations<T: Real>(c1: T, c2: T, m1: &[Complex<T>; 2], m2: &[Complex<T>; 2]) -> [Complex<T>; 2] {
    [
        m1[0] * (c1 * c1 + c1 * c2) + m2[0] * (c2 * c2 + c1 * c2),
        m1[1] * (c1 * c1 - c1 * c2) + m2[1] * (c2 * c2 - c1 * c2),
    ]
}

/// `m̃_j = η_j [ϑ×(ϑ×Yp)]_j` for one setup.
pub fn m_tilde_direct<T: Real>(setup: &PolarizationSetup<T>, theta: &Direction<T>, y: &CMat3<T>) -> [Complex<T>; 2] {
    let w = double_cross(theta, &mvec(y, &setup.p));
    [setup.eta[0] * w[0], setup.eta[1] * w[1]]
}

/// Largest deviation between the combination of standard-setup data and
/// data simulated directly for `q = (c₁, c₂, 0)` with the standard plate angles.
pub fn polarization_span_check<T: Real>(c1: T, c2: T, theta: &Direction<T>, y: &CMat3<T>) -> Result<T> {
    let s1 = PolarizationSetup::standard(1);
    let s2 = PolarizationSetup::standard(2);
    let combined = PolarizationSetup::new(
        [c1, c2, T::zero()],
        lit(crate::jones::REFERENCE_PLATE_ANGLE),
        lit(crate::jones::SAMPLE_PLATE_ANGLE),
    )?;
    let want = m_tilde_direct(&combined, theta, y);
    let got = combine_polarizations(c1, c2, &m_tilde_direct(&s1, theta, y), &m_tilde_direct(&s2, theta, y));
    Ok((want[0] - got[0]).norm().max((want[1] - got[1]).norm()))
}
