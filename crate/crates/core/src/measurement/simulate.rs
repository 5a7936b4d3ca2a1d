//! Full synthetic measurement: Born far fields for every frequency and
//! direction, interferograms for both setups with and without the
//! perturbation, and the reciprocal-space samples extracted from them.

use log::debug;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::born::{born_far_fields, BornOrder, FarFieldRecord};
use crate::forward::grid::SelfCellRule;
use crate::forward::operator::GreenOperator;
use crate::forward::susceptibility::OrthotropicSusceptibility;
use crate::jones::PolarizationSetup;
use crate::math::direction::Direction;
use crate::math::pulse::PulseEnvelope;
use crate::measurement::grids::{stationary_mirror_position, LGrid, OmegaGrid};
use crate::measurement::interferogram::{compute_m_tilde, synthesize_interferogram, Interferogram};
use crate::measurement::kspace::KSpaceSample;
use crate::scalar::{lit, Real};

/// Sampling of one synthetic measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementConfig {
    pub omegas: OmegaGrid,
    /// Mirror positions per interferogram; the window spans one beat period.
    pub l_count: usize,
    pub rho: f64,
    pub c: f64,
    #[serde(default = "default_order")]
    pub born_order: u32,
    /// Standard deviation of additive detector noise relative to the RMS of
    /// each data interferogram. Zero disables noise.
    #[serde(default)]
    pub noise: f64,
}

fn default_order() -> u32 {
    2
}

impl MeasurementConfig {
    pub fn validate(&self) -> Result<()> {
        self.omegas.validate()?;
        if !(self.rho > 0.0) || !(self.c > 0.0) {
            return Err(Error::InvalidArgument("ρ and c must be positive".into()));
        }
        if !(self.noise >= 0.0) {
            return Err(Error::InvalidArgument("noise level must be non-negative".into()));
        }
        BornOrder::from_int(self.born_order)?;
        self.l_grid(0.0).map(|_| ())
    }

    /// Mirror grid centred on the stationary position for `ϑ₃`.
    pub fn l_grid(&self, theta3: f64) -> Result<LGrid> {
        LGrid::one_period(
            &self.omegas,
            self.c,
            self.l_count,
            stationary_mirror_position(self.rho, theta3),
        )
    }
}

/// Interferograms for both setups at every detector direction.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet<T> {
    pub eps: T,
    pub thetas: Vec<Direction<T>>,
    /// `data[d][s]`: direction `d`, setup `s`.
    pub data: Vec<[Interferogram<T>; 2]>,
    pub background: Vec<[Interferogram<T>; 2]>,
}

impl<T: Real> MeasurementSet<T> {
    /// `m̃` samples at `omega` for every direction.
    pub fn samples_at(&self, omega: T) -> Result<Vec<KSpaceSample<T>>> {
        self.data
            .par_iter()
            .zip(&self.background)
            .map(|(d, b)| compute_m_tilde([&d[0], &d[1]], [&b[0], &b[1]], self.eps, omega))
            .collect()
    }

    /// Samples for several frequencies, frequency-major.
    pub fn samples(&self, omegas: &[T]) -> Result<Vec<KSpaceSample<T>>> {
        let mut out = Vec::with_capacity(omegas.len() * self.thetas.len());
        for &w in omegas {
            out.extend(self.samples_at(w)?);
        }
        Ok(out)
    }
}

/// Far-field records `[setup][direction][frequency]` of one medium.
fn far_fields<T: Real>(
    sus: &OrthotropicSusceptibility<T>,
    setups: &[PolarizationSetup<T>; 2],
    pulse: &PulseEnvelope,
    cfg: &MeasurementConfig,
    thetas: &[Direction<T>],
    ops: &[GreenOperator<T>],
) -> Result<[Vec<Vec<FarFieldRecord<T>>>; 2]> {
    let order = BornOrder::from_int(cfg.born_order)?;
    let c = lit::<T>(cfg.c);
    let rho = lit::<T>(cfg.rho);
    let mut out = [vec![Vec::new(); thetas.len()], vec![Vec::new(); thetas.len()]];
    for op in ops {
        for (s, setup) in setups.iter().enumerate() {
            let recs = born_far_fields(sus, setup, pulse, op, c, thetas, rho, order)?;
            for (d, r) in recs.into_iter().enumerate() {
                out[s][d].push(r);
            }
        }
    }
    Ok(out)
}

fn interferograms<T: Real>(
    records: &[Vec<Vec<FarFieldRecord<T>>>; 2],
    setups: &[PolarizationSetup<T>; 2],
    pulse: &PulseEnvelope,
    cfg: &MeasurementConfig,
    thetas: &[Direction<T>],
) -> Result<Vec<[Interferogram<T>; 2]>> {
    let c = lit::<T>(cfg.c);
    thetas
        .par_iter()
        .enumerate()
        .map(|(d, theta)| {
            let l = cfg.l_grid(theta.theta()[2].to_f64().unwrap_or(f64::NAN))?;
            let a = synthesize_interferogram(&records[0][d], &setups[0], &cfg.omegas, &l, pulse, c)?;
            let b = synthesize_interferogram(&records[1][d], &setups[1], &cfg.omegas, &l, pulse, c)?;
            Ok([a, b])
        })
        .collect()
}

/// Simulates data and `ε = 0` background interferograms. With `ε = 0` the
/// two coincide bit for bit. Noise, if
/// configured, is drawn from `rng` in direction-then-setup order.
pub fn simulate_measurement<T: Real, R: Rng + ?Sized>(
    sus: &OrthotropicSusceptibility<T>,
    setups: &[PolarizationSetup<T>; 2],
    pulse: &PulseEnvelope,
    cfg: &MeasurementConfig,
    thetas: &[Direction<T>],
    rule: &dyn SelfCellRule<T>,
    rng: &mut R,
) -> Result<MeasurementSet<T>> {
    cfg.validate()?;
    pulse.validate()?;
    if thetas.is_empty() {
        return Err(Error::EmptyInput("no detector directions"));
    }
    let c = lit::<T>(cfg.c);
    let ops: Vec<GreenOperator<T>> = cfg
        .omegas
        .omegas::<T>()
        .into_iter()
        .map(|w| GreenOperator::new(sus.grid, w / c, rule))
        .collect::<Result<_>>()?;
    debug!("built {} volume operators", ops.len());
    let data_ff = far_fields(sus, setups, pulse, cfg, thetas, &ops)?;
    let back_ff = far_fields(&sus.background(), setups, pulse, cfg, thetas, &ops)?;
    let mut data = interferograms(&data_ff, setups, pulse, cfg, thetas)?;
    let background = interferograms(&back_ff, setups, pulse, cfg, thetas)?;
    if cfg.noise > 0.0 {
        for pair in data.iter_mut() {
            for ig in pair.iter_mut() {
                let sigma = ig.rms() * lit(cfg.noise);
                ig.add_noise(sigma, rng);
            }
        }
    }
    Ok(MeasurementSet {
        eps: sus.eps,
        thetas: thetas.to_vec(),
        data,
        background,
    })
}
