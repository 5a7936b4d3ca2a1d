//! Run configuration: one JSON file drives every subcommand.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use psoct::forward::EquivalentSphere;
use psoct::inverse::InversionConfig;
use psoct::io::read_json;
use psoct::jones::{PolarizationSetup, SetupSpec};
use psoct::math::direction::{fibonacci_cap, Direction};
use psoct::math::pulse::PulseEnvelope;
use psoct::measurement::MeasurementConfig;
use psoct::phantom::PhantomSpec;
use psoct::{Error, Setup};
use serde::{Deserialize, Serialize};

/// Relative pulse width used when the config names none.
pub const DEFAULT_PULSE_WIDTH: f64 = 0.06;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub count: usize,
    /// Directions cover `ϑ₃ ∈ [min_theta3, 1]`.
    pub min_theta3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Phantom file, relative to the config file.
    pub phantom: PathBuf,
    pub measurement: MeasurementConfig,
    #[serde(default)]
    pub pulse: Option<PulseEnvelope>,
    pub detectors: DetectorConfig,
    /// Defaults to the standard pair.
    #[serde(default)]
    pub setups: Option<[SetupSpec; 2]>,
    /// Frequency-grid offsets from the centre used by the inversion.
    #[serde(default = "centre_only")]
    pub inversion_offsets: Vec<i64>,
    #[serde(default)]
    pub inversion: InversionConfig,
    /// Output directory, relative to the config file.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Directory holding forward data for `extract`/`invert`; defaults to the output.
    #[serde(default)]
    pub data: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
}

fn centre_only() -> Vec<i64> {
    vec![0]
}

/// A config with its location, so relative paths can be resolved.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub cfg: RunConfig,
    pub base: PathBuf,
}

impl Loaded {
    pub fn from_path(path: &Path) -> Result<Self> {
        let cfg: RunConfig = read_json(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let me = Self { cfg, base };
        me.validate()?;
        Ok(me)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn phantom(&self) -> Result<PhantomSpec> {
        let path = self.resolve(&self.cfg.phantom);
        if !path.exists() {
            return Err(Error::InvalidArgument(format!("phantom file {} does not exist", path.display())).into());
        }
        let spec: PhantomSpec = read_json(&path)?;
        spec.validate()?;
        self.check_resolution(&spec)?;
        Ok(spec)
    }

    /// Output directory: the `--out` flag, else the config entry, else `./out`.
    pub fn out_dir(&self, flag: Option<&Path>) -> PathBuf {
        match (flag, &self.cfg.output) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(p)) => self.resolve(p),
            (None, None) => PathBuf::from("out"),
        }
    }

    pub fn data_dir(&self, out: &Path) -> PathBuf {
        match &self.cfg.data {
            Some(p) => self.resolve(p),
            None => out.to_path_buf(),
        }
    }

    pub fn pulse(&self) -> PulseEnvelope {
        self.cfg.pulse.clone().unwrap_or_else(|| {
            let c = self.cfg.measurement.omegas.center;
            PulseEnvelope::gaussian(c, DEFAULT_PULSE_WIDTH * c)
        })
    }

    pub fn setups(&self) -> Result<[Setup; 2]> {
        Ok(match &self.cfg.setups {
            Some([a, b]) => [PolarizationSetup::from_spec(a)?, PolarizationSetup::from_spec(b)?],
            None => [PolarizationSetup::standard(1), PolarizationSetup::standard(2)],
        })
    }

    pub fn directions(&self) -> Vec<Direction<f64>> {
        fibonacci_cap(self.cfg.detectors.count, self.cfg.detectors.min_theta3)
    }

    pub fn inversion_omegas(&self) -> Vec<f64> {
        let g = &self.cfg.measurement.omegas;
        self.cfg
            .inversion_offsets
            .iter()
            .map(|&j| g.omega_at::<f64>((j + g.half as i64) as usize))
            .collect()
    }

    pub fn rule(&self) -> EquivalentSphere {
        EquivalentSphere
    }

    fn validate(&self) -> Result<()> {
        let c = &self.cfg;
        c.measurement.validate().context("measurement section")?;
        self.pulse().validate().context("pulse section")?;
        let d = &c.detectors;
        if d.count == 0 {
            bail!(Error::InvalidArgument("detectors.count must be positive".into()));
        }
        if !(d.min_theta3 > 0.0 && d.min_theta3 < 1.0) {
            bail!(Error::InvalidArgument(format!(
                "detectors.min_theta3 = {} must lie in (0, 1) so that every direction has ϑ₃ > 0",
                d.min_theta3
            )));
        }
        if c.inversion_offsets.is_empty() {
            bail!(Error::InvalidArgument("inversion_offsets must name at least one frequency".into()));
        }
        let half = c.measurement.omegas.half as i64;
        if let Some(j) = c.inversion_offsets.iter().find(|j| j.abs() > half) {
            bail!(Error::InvalidArgument(format!(
                "inversion offset {j} lies outside the frequency grid (±{half})"
            )));
        }
        if c.threads == Some(0) {
            bail!(Error::InvalidArgument("threads must be positive".into()));
        }
        self.setups()?;
        Ok(())
    }

    /// At least two voxels per shortest wavelength.
    fn check_resolution(&self, spec: &PhantomSpec) -> Result<()> {
        let m = &self.cfg.measurement;
        let lambda_min = std::f64::consts::TAU * m.c / m.omegas.max_omega();
        if spec.grid.h > lambda_min / 2.0 {
            bail!(Error::InvalidArgument(format!(
                "voxel size {} exceeds half the shortest wavelength {lambda_min:.4}; refine the grid or lower the frequencies",
                spec.grid.h
            )));
        }
        Ok(())
    }
}
