//! Interferogram synthesis and inversion of its mirror-position dependence.
//!
//! With `Φ_n(l) = e^{iω_n(2l − ξ₃)/c}`:
//!
//! `I_j(l) = (1/π) Re Σ_n w_n Ê_{n,j} conj(η_j f̂_n) Φ_n(l)`
//!
//! On a mirror grid spanning one period `P = πc/Δω` the `Φ_n` are discretely
//! orthogonal, so `Ê_{n,j} = 2π/(conj(η_j f̂_n) w_n P) Σ_i I_j(l_i) conj Φ_n(l_i) Δl`,
//! which is `2/(η_j c f̂(−ω))∫ I_j e^{−iω(2l−ξ₃)/c} dl` in the continuum.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::forward::born::FarFieldRecord;
use crate::jones::PolarizationSetup;
use crate::math::direction::{to_f64, Direction};
use crate::math::pulse::PulseEnvelope;
use crate::math::vec3::Vec3;
use crate::measurement::grids::{LGrid, OmegaGrid};
use crate::scalar::{cis, lit, Real};

/// Default relative floor on `|f̂(ω)|` below which extraction is refused.
pub const DEFAULT_PULSE_FLOOR: f64 = 1e-8;

/// Detector intensities over mirror positions at one detector point `ρϑ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interferogram<T> {
    pub l_grid: LGrid,
    pub omegas: OmegaGrid,
    pub theta: Direction<T>,
    pub rho: T,
    pub c: T,
    pub setup: PolarizationSetup<T>,
    pub pulse: PulseEnvelope,
    pub i1: Vec<T>,
    pub i2: Vec<T>,
}

impl<T: Real> Interferogram<T> {
    pub fn detector_point(&self) -> Vec3<T> {
        let t = self.theta.theta();
        [t[0] * self.rho, t[1] * self.rho, t[2] * self.rho]
    }

    pub fn channel(&self, j: usize) -> &[T] {
        match j {
            0 => &self.i1,
            1 => &self.i2,
            _ => panic!("interferograms have two channels"),
        }
    }

    /// Checks shapes and sampling constraints.
    pub fn validate(&self) -> Result<()> {
        if self.i1.len() != self.l_grid.count || self.i2.len() != self.l_grid.count {
            return Err(Error::Shape(format!(
                "intensity columns have {} and {} entries, mirror grid has {}",
                self.i1.len(),
                self.i2.len(),
                self.l_grid.count
            )));
        }
        if !(self.rho > T::zero()) {
            return Err(Error::InvalidArgument("detector radius must be positive".into()));
        }
        self.omegas.validate()?;
        self.l_grid.check(&self.omegas, self.c.to_f64().unwrap_or(f64::NAN))
    }

    /// `(I − I₀)/ε` channel-wise, with the sampling of `self`.
    pub fn perturbation(&self, background: &Self, eps: T) -> Result<Self> {
        if !(eps != T::zero()) {
            return Err(Error::InvalidArgument("ε must be non-zero to form (I − I₀)/ε".into()));
        }
        if background.l_grid != self.l_grid || background.i1.len() != self.i1.len() {
            return Err(Error::Shape("background interferogram uses a different mirror grid".into()));
        }
        let d = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| (*x - *y) / eps).collect();
        Ok(Self {
            i1: d(&self.i1, &background.i1),
            i2: d(&self.i2, &background.i2),
            ..self.clone()
        })
    }

    /// Adds independent `N(0, σ²)` noise to both channels.
    pub fn add_noise<R: Rng + ?Sized>(&mut self, sigma: T, rng: &mut R) {
        for v in self.i1.iter_mut().chain(self.i2.iter_mut()) {
            let z: f64 = StandardNormal.sample(rng);
            *v += sigma * lit::<T>(z);
        }
    }

    /// Root-mean-square intensity over both channels.
    pub fn rms(&self) -> T {
        let n = lit::<T>((self.i1.len() + self.i2.len()) as f64);
        (self.i1.iter().chain(&self.i2).map(|x| *x * *x).sum::<T>() / n).sqrt()
    }
}

fn phase_argument<T: Real>(omega: T, c: T, l: T, xi3: T) -> T {
    omega * (lit::<T>(2.0) * l - xi3) / c
}

/// Quadrature of the interferogram integral over the frequency grid.
/// `records[n]` must hold the scattered field at `omegas.omega_at(n)` and the
/// common detector point.
pub fn synthesize_interferogram<T: Real>(
    records: &[FarFieldRecord<T>],
    setup: &PolarizationSetup<T>,
    omegas: &OmegaGrid,
    l_grid: &LGrid,
    pulse: &PulseEnvelope,
    c: T,
) -> Result<Interferogram<T>> {
    if records.len() != omegas.len() {
        return Err(Error::Shape(format!(
            "{} far-field records for {} frequencies",
            records.len(),
            omegas.len()
        )));
    }
    let first = records[0];
    for (n, r) in records.iter().enumerate() {
        let w: T = omegas.omega_at(n);
        if (r.omega - w).abs() > lit::<T>(1e-9) * w {
            return Err(Error::Shape(format!("record {n} is at ω = {}, grid has {}", r.omega, w)));
        }
        if r.theta != first.theta || r.rho != first.rho {
            return Err(Error::Shape("records must share one detector point".into()));
        }
    }
    for j in 0..2 {
        if setup.eta[j].is_zero() {
            return Err(Error::InvalidArgument(format!("reference polarization component η_{} is zero", j + 1)));
        }
    }
    l_grid.check(omegas, c.to_f64().unwrap_or(f64::NAN))?;
    let xi3 = first.theta.theta()[2] * first.rho;
    let weight: T = omegas.weight();
    // coefficient per (n, j): w_n Ê_{n,j} conj(η_j f̂_n) / π
    let coef: Vec<[Complex<T>; 2]> = records
        .iter()
        .map(|r| {
            let fh = pulse.f_hat(r.omega);
            let mut out = [Complex::zero(); 2];
            for j in 0..2 {
                out[j] = r.e_scat[j] * (setup.eta[j] * fh).conj() * (weight / T::PI());
            }
            out
        })
        .collect();
    let mut i1 = Vec::with_capacity(l_grid.count);
    let mut i2 = Vec::with_capacity(l_grid.count);
    for i in 0..l_grid.count {
        let l: T = l_grid.value(i);
        let mut acc = [T::zero(); 2];
        for (r, cf) in records.iter().zip(&coef) {
            let ph = cis(phase_argument(r.omega, c, l, xi3));
            for j in 0..2 {
                acc[j] += (cf[j] * ph).re;
            }
        }
        i1.push(acc[0]);
        i2.push(acc[1]);
    }
    Ok(Interferogram {
        l_grid: *l_grid,
        omegas: *omegas,
        theta: first.theta,
        rho: first.rho,
        c,
        setup: *setup,
        pulse: pulse.clone(),
        i1,
        i2,
    })
}

/// `Σ_i I_j(l_i) e^{−iω(2l_i − ξ₃)/c} Δl` for both channels.
fn mirror_transform<T: Real>(ig: &Interferogram<T>, omega: T) -> [Complex<T>; 2] {
    let xi3 = ig.theta.theta()[2] * ig.rho;
    let dl = lit::<T>(ig.l_grid.step);
    let mut acc = [Complex::zero(); 2];
    for i in 0..ig.l_grid.count {
        let ph = cis(-phase_argument(omega, ig.c, ig.l_grid.value(i), xi3));
        acc[0] += ph * ig.i1[i];
        acc[1] += ph * ig.i2[i];
    }
    [acc[0] * dl, acc[1] * dl]
}

fn checked_pulse<T: Real>(ig: &Interferogram<T>, omega: T) -> Result<Complex<T>> {
    if !(omega > T::zero()) {
        return Err(Error::ZeroFrequency("extraction needs ω > 0"));
    }
    if ig.omegas.index_of(omega).is_none() {
        return Err(Error::InvalidArgument(format!("ω = {omega} is not on the interferogram frequency grid")));
    }
    let fh = ig.pulse.f_hat(omega);
    let peak = ig.pulse.f_hat::<T>(lit(ig.pulse.center())).norm();
    if !(fh.norm() > lit::<T>(DEFAULT_PULSE_FLOOR) * peak) {
        return Err(Error::Conditioning {
            omega: omega.to_f64().unwrap_or(f64::NAN),
            amplitude: fh.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(fh)
}

/// Recovers `Ê² − Ê^{0,inc}` (components 1 and 2) at `ω` and the detector point.
pub fn extract_scattered_field<T: Real>(ig: &Interferogram<T>, omega: T) -> Result<[Complex<T>; 2]> {
    let fh = checked_pulse(ig, omega)?;
    let period = lit::<T>(std::f64::consts::PI) * ig.c / lit(ig.omegas.step);
    let w: T = ig.omegas.weight();
    let s = mirror_transform(ig, omega);
    let mut out = [Complex::zero(); 2];
    for j in 0..2 {
        let eta = ig.setup.eta[j];
        if eta.is_zero() {
            return Err(Error::InvalidArgument(format!("η_{} is zero", j + 1)));
        }
        out[j] = s[j] * T::TAU() / ((eta * fh).conj() * w * period);
    }
    Ok(out)
}

/// `m̃_j = η_j [ϑ×(ϑ×Yp)]_j` from the perturbation interferogram `M = (I − I₀)/ε`:
/// `m̃_j = −(8π²ρ/(k²|f̂|² w P)) (η_j/conj η_j) e^{−ikρ} Σ_i M_j(l_i) e^{−ik(2l_i−ξ₃)} Δl`,
/// which is `−(8πρc/(ω²|f̂|²)) ∫ M_j e^{−ik(2l − ρ(ϑ₃−1))} dl` in the continuum.
pub fn m_tilde_from_perturbation<T: Real>(m: &Interferogram<T>, omega: T) -> Result<[Complex<T>; 2]> {
    let fh = checked_pulse(m, omega)?;
    let k = omega / m.c;
    let period = lit::<T>(std::f64::consts::PI) * m.c / lit(m.omegas.step);
    let w: T = m.omegas.weight();
    let pre = -lit::<T>(8.0) * T::PI() * T::PI() * m.rho / (k * k * fh.norm_sqr() * w * period);
    let back = cis(-k * m.rho);
    let s = mirror_transform(m, omega);
    let mut out = [Complex::zero(); 2];
    for j in 0..2 {
        let eta = m.setup.eta[j];
        if eta.is_zero() {
            return Err(Error::InvalidArgument(format!("η_{} is zero", j + 1)));
        }
        out[j] = s[j] * back * (eta / eta.conj()) * pre;
    }
    Ok(out)
}

/// Both setups' `m̃` at one `(ω, ϑ)` from data and background interferograms.
pub fn compute_m_tilde<T: Real>(
    data: [&Interferogram<T>; 2],
    background: [&Interferogram<T>; 2],
    eps: T,
    omega: T,
) -> Result<crate::measurement::kspace::KSpaceSample<T>> {
    let theta = data[0].theta;
    for ig in data.iter().chain(background.iter()) {
        if ig.theta != theta || ig.rho != data[0].rho {
            return Err(Error::Shape(format!(
                "interferograms at different detector points ({:?})",
                to_f64(&ig.theta.theta())
            )));
        }
    }
    let mut m = [[Complex::zero(); 2]; 2];
    for s in 0..2 {
        let pert = data[s].perturbation(background[s], eps)?;
        m[s] = m_tilde_from_perturbation(&pert, omega)?;
    }
    crate::measurement::kspace::KSpaceSample::new(omega, data[0].c, theta, m)
}
