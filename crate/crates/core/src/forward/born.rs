//! First- and second-order Born far fields.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::grid::{SelfCellRule, VoxelGrid};
use crate::forward::operator::GreenOperator;
use crate::forward::susceptibility::OrthotropicSusceptibility;
use crate::jones::PolarizationSetup;
use crate::math::direction::{double_cross, to_f64, Direction};
use crate::math::pulse::PulseEnvelope;
use crate::math::vec3::{cscale, dot, mvec, CMat3, CVec3};
use crate::scalar::{cis, lit, re, Real};

/// Scattered far field `Ê² − Ê^{0,inc}` at the detector point `ρϑ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarFieldRecord<T> {
    pub omega: T,
    pub theta: Direction<T>,
    pub rho: T,
    pub e_scat: CVec3<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BornOrder {
    First,
    Second,
}

impl BornOrder {
    pub fn from_int(order: u32) -> Result<Self> {
        match order {
            1 => Ok(BornOrder::First),
            2 => Ok(BornOrder::Second),
            _ => Err(Error::InvalidArgument(format!("Born order must be 1 or 2, got {order}"))),
        }
    }
}

fn far_field_prefactor<T: Real>(k: T, rho: T) -> Complex<T> {
    cis(k * rho) * (-(k * k) / (lit::<T>(4.0) * T::PI() * rho))
}

/// `𝒢∞[f] = −(k² e^{ikρ}/4πρ) Σ_y ϑ×(ϑ×f(y)) e^{−ik⟨ϑ,y⟩} h³`.
pub fn far_field_op<T: Real>(
    grid: &VoxelGrid<T>,
    f: &[CVec3<T>],
    k: T,
    theta: &Direction<T>,
    rho: T,
) -> Result<CVec3<T>> {
    if !(rho > T::zero()) {
        return Err(Error::InvalidArgument("detector radius must be positive".into()));
    }
    if !(k > T::zero()) {
        return Err(Error::ZeroFrequency("far-field operator"));
    }
    if f.len() != grid.len() {
        return Err(Error::GridMismatch {
            expected: grid.len(),
            got: f.len(),
        });
    }
    let t = theta.theta();
    let mut acc = [Complex::<T>::zero(); 3];
    for (idx, fy) in f.iter().enumerate() {
        let y = grid.center(idx);
        let ph = cis(-k * dot(&t, &y));
        for c in 0..3 {
            acc[c] += fy[c] * ph;
        }
    }
    let w = grid.weight();
    let acc = [acc[0] * w, acc[1] * w, acc[2] * w];
    Ok(cscale(&double_cross(theta, &acc), far_field_prefactor(k, rho)))
}

/// `k² Σ_z A(y,z) χ(z) e(z)`.
pub fn ls_apply<T: Real>(op: &GreenOperator<T>, chi: &[CMat3<T>], e_in: &[CVec3<T>]) -> Result<Vec<CVec3<T>>> {
    let n = op.grid().len();
    for len in [chi.len(), e_in.len()] {
        if len != n {
            return Err(Error::GridMismatch { expected: n, got: len });
        }
    }
    let src: Vec<CVec3<T>> = chi.iter().zip(e_in).map(|(m, e)| mvec(m, e)).collect();
    let k = op.wavenumber();
    let k2 = re(k * k);
    Ok(op.apply(&src)?.into_iter().map(|v| cscale(&v, k2)).collect())
}

/// Equivalent source `χ̂ u` of the Born far field for one frequency and one
/// incident polarization `p`, with `u = p e^{−ikz₃}` (first order) or
/// `u = p e^{−ikz₃} + 𝒢[χ̂ p e^{−ikz₃}]` (second order).
pub struct BornSource<T> {
    grid: VoxelGrid<T>,
    k: T,
    source: Vec<CVec3<T>>,
}

impl<T: Real> BornSource<T> {
    pub fn new(
        sus: &OrthotropicSusceptibility<T>,
        p: &CVec3<T>,
        op: &GreenOperator<T>,
        order: BornOrder,
    ) -> Result<Self> {
        if op.grid() != &sus.grid {
            return Err(Error::InvalidArgument("operator and medium use different grids".into()));
        }
        let grid = sus.grid;
        let k = op.wavenumber();
        let chi = sus.chi_field();
        let incident: Vec<CVec3<T>> = (0..grid.len())
            .map(|i| cscale(p, cis(-k * grid.center(i)[2])))
            .collect();
        let total = match order {
            BornOrder::First => incident,
            BornOrder::Second => {
                let scattered = ls_apply(op, &chi, &incident)?;
                incident
                    .iter()
                    .zip(&scattered)
                    .map(|(a, b)| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
                    .collect()
            }
        };
        let source = chi.iter().zip(&total).map(|(m, u)| mvec(m, u)).collect();
        Ok(Self { grid, k, source })
    }

    pub fn source(&self) -> &[CVec3<T>] {
        &self.source
    }

    /// Far field per unit pulse amplitude.
    pub fn far_field(&self, theta: &Direction<T>, rho: T) -> Result<CVec3<T>> {
        far_field_op(&self.grid, &self.source, self.k, theta, rho)
    }
}

fn check_detector<T: Real>(theta: &Direction<T>) -> Result<()> {
    if !theta.in_upper_hemisphere() {
        return Err(Error::Direction(to_f64(&theta.theta()), "detector requires ϑ₃ > 0"));
    }
    Ok(())
}

/// Far-field records for all `thetas` at one frequency, sharing one source.
#[allow(clippy::too_many_arguments)]
pub fn born_far_fields<T: Real>(
    sus: &OrthotropicSusceptibility<T>,
    setup: &PolarizationSetup<T>,
    pulse: &PulseEnvelope,
    op: &GreenOperator<T>,
    c: T,
    thetas: &[Direction<T>],
    rho: T,
    order: BornOrder,
) -> Result<Vec<FarFieldRecord<T>>> {
    for t in thetas {
        check_detector(t)?;
    }
    let k = op.wavenumber();
    let omega = k * c;
    let source = BornSource::new(sus, &setup.p, op, order)?;
    let amp = pulse.f_hat(omega);
    thetas
        .par_iter()
        .map(|theta| {
            let e = source.far_field(theta, rho)?;
            Ok(FarFieldRecord {
                omega,
                theta: *theta,
                rho,
                e_scat: cscale(&e, amp),
            })
        })
        .collect()
}

/// Single far-field record; builds the volume operator for `ω`.
#[allow(clippy::too_many_arguments)]
pub fn born_far_field<T: Real>(
    sus: &OrthotropicSusceptibility<T>,
    setup: &PolarizationSetup<T>,
    pulse: &PulseEnvelope,
    rule: &dyn SelfCellRule<T>,
    c: T,
    omega: T,
    theta: &Direction<T>,
    rho: T,
    order: BornOrder,
) -> Result<FarFieldRecord<T>> {
    check_detector(theta)?;
    let op = GreenOperator::new(sus.grid, omega / c, rule)?;
    let mut v = born_far_fields(sus, setup, pulse, &op, c, std::slice::from_ref(theta), rho, order)?;
    Ok(v.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::grid::EquivalentSphere;
    use crate::math::vec3::{rdot, to_complex};

    fn blob(grid: VoxelGrid<f64>, chi0: f64) -> OrthotropicSusceptibility<f64> {
        let mut s = OrthotropicSusceptibility::zeros(grid, chi0, 1.0);
        for i in 0..grid.len() {
            let x = grid.center(i);
            let g = (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 0.02).exp();
            s.psi[0][i] = Complex::new(g, 0.0);
            s.psi[1][i] = Complex::new(0.3 * g, 0.1 * g);
            s.psi[2][i] = Complex::new(0.7 * g, 0.0);
            s.psi[3][i] = Complex::new(0.5 * g, 0.0);
        }
        s
    }

    #[test]
    fn empty_medium_scatters_nothing() {
        let grid = VoxelGrid::cube(4, 0.1).unwrap();
        let sus = OrthotropicSusceptibility::zeros(grid, 0.0, 0.0);
        let setup = PolarizationSetup::standard(1);
        let theta = Direction::normalized([0.2, 0.1, 1.0]).unwrap();
        let pulse = PulseEnvelope::gaussian(6.0, 0.3);
        let r = born_far_field(&sus, &setup, &pulse, &EquivalentSphere, 1.0, 6.0, &theta, 10.0, BornOrder::Second)
            .unwrap();
        assert!(r.e_scat.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn far_field_is_transverse() {
        let grid = VoxelGrid::cube(5, 0.08).unwrap();
        let sus = blob(grid, 0.05);
        let op = GreenOperator::new(grid, 6.0, &EquivalentSphere).unwrap();
        let setup = PolarizationSetup::standard(2);
        let pulse = PulseEnvelope::gaussian(6.0, 0.3);
        let thetas: Vec<_> = crate::math::direction::fibonacci_cap(20, 0.3);
        let recs = born_far_fields(&sus, &setup, &pulse, &op, 1.0, &thetas, 50.0, BornOrder::Second).unwrap();
        for r in &recs {
            let scale = r.e_scat.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(rdot(&r.theta.theta(), &r.e_scat).norm() <= 1e-12 * scale.max(1e-300));
        }
    }

    #[test]
    fn single_voxel_far_field() {
        let grid = VoxelGrid::cube(3, 0.1).unwrap();
        let mut f = vec![[Complex::zero(); 3]; grid.len()];
        let a = to_complex(&[1.0, -2.0, 0.5]);
        f[5] = a;
        let theta = Direction::normalized([0.3, -0.2, 0.9]).unwrap();
        let (k, rho) = (4.0, 7.0);
        let got = far_field_op(&grid, &f, k, &theta, rho).unwrap();
        let y0 = grid.center(5);
        let pre = far_field_prefactor(k, rho) * cis(-k * dot(&theta.theta(), &y0)) * grid.weight();
        let want = cscale(&double_cross(&theta, &a), pre);
        for c in 0..3 {
            assert!((got[c] - want[c]).norm() < 1e-15);
        }
    }

    #[test]
    fn lower_hemisphere_detector_rejected() {
        let grid = VoxelGrid::cube(2, 0.1).unwrap();
        let sus = OrthotropicSusceptibility::zeros(grid, 0.0, 0.0);
        let theta = Direction::normalized([0.0, 0.3, -1.0]).unwrap();
        let r = born_far_field(
            &sus,
            &PolarizationSetup::standard(1),
            &PulseEnvelope::gaussian(1.0, 0.1),
            &EquivalentSphere,
            1.0,
            1.0,
            &theta,
            1.0,
            BornOrder::First,
        );
        assert!(r.is_err());
        assert!(BornOrder::from_int(3).is_err());
    }
}
