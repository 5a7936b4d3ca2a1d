//! Subcommands other than `selftest`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use log::info;
use num_complex::Complex;
use psoct::inverse::{reconstruct, sample_transform, InversionConfig, Reconstruction, Regularization};
use psoct::io::{
    load_measurement_set, load_samples, save_measurement_set, save_reconstruction, save_samples, write_json,
    MEASUREMENT_MANIFEST,
};
use psoct::measurement::{simulate_measurement, KSpaceSample, MeasurementSet};
use psoct::phantom::PhantomSpec;
use psoct::{Error, Grid};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Loaded, RunConfig};

pub const SAMPLES_STEM: &str = "samples";

/// Everything a subcommand needs after flag overrides.
pub struct Ctx {
    pub loaded: Loaded,
    pub out: PathBuf,
    pub seed: u64,
    pub lambda: Option<f64>,
}

impl Ctx {
    fn inversion(&self) -> InversionConfig {
        let mut inv = self.loaded.cfg.inversion.clone();
        if let Some(lambda) = self.lambda {
            inv.regularization = Regularization::Fixed { lambda };
        }
        inv
    }

    fn measurement_dir(&self) -> PathBuf {
        self.loaded.data_dir(&self.out).join("measurement")
    }
}

#[derive(Default, Serialize)]
struct Timings(Vec<(String, f64)>);

impl Timings {
    fn time<R>(&mut self, stage: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.0.push((stage.into(), t.elapsed().as_secs_f64()));
        r
    }

    fn write(&self, path: &Path) -> Result<()> {
        let rows: Vec<serde_json::Value> =
            self.0.iter().map(|(k, v)| serde_json::json!({ "stage": k, "seconds": v })).collect();
        write_json(path, &rows)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct ForwardManifest<'a> {
    config: &'a RunConfig,
    phantom: &'a PhantomSpec,
    seed: u64,
    directions: usize,
    frequencies: usize,
    measurement: String,
}

fn simulate(ctx: &Ctx, spec: &PhantomSpec, timings: &mut Timings) -> Result<MeasurementSet<f64>> {
    let l = &ctx.loaded;
    let sus = timings.time("rasterize", || spec.rasterize::<f64>())?;
    let setups = l.setups()?;
    let thetas = l.directions();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let set = timings.time("forward model", || {
        simulate_measurement(&sus, &setups, &l.pulse(), &l.cfg.measurement, &thetas, &l.rule(), &mut rng)
    })?;
    info!("simulated {} directions × {} frequencies", thetas.len(), l.cfg.measurement.omegas.len());
    Ok(set)
}

pub fn forward(ctx: &Ctx) -> Result<()> {
    let spec = ctx.loaded.phantom()?;
    let mut timings = Timings::default();
    let set = simulate(ctx, &spec, &mut timings)?;
    let dir = ctx.out.join("measurement");
    timings.time("write", || save_measurement_set(&dir, &set))?;
    let man = ForwardManifest {
        config: &ctx.loaded.cfg,
        phantom: &spec,
        seed: ctx.seed,
        directions: set.thetas.len(),
        frequencies: ctx.loaded.cfg.measurement.omegas.len(),
        measurement: format!("measurement/{MEASUREMENT_MANIFEST}"),
    };
    write_json(&ctx.out.join("forward.json"), &man)?;
    timings.write(&ctx.out.join("forward_timings.json"))?;
    println!("wrote {} interferogram pairs to {}", 2 * set.thetas.len(), dir.display());
    Ok(())
}

fn extract_samples(ctx: &Ctx, set: &MeasurementSet<f64>) -> Result<Vec<KSpaceSample<f64>>> {
    Ok(set.samples(&ctx.loaded.inversion_omegas())?)
}

pub fn extract(ctx: &Ctx) -> Result<()> {
    let dir = ctx.measurement_dir();
    let set = load_measurement_set::<f64>(&dir).with_context(|| format!("reading {}", dir.display()))?;
    let samples = extract_samples(ctx, &set)?;
    let path = save_samples(&ctx.out, SAMPLES_STEM, ctx.loaded.cfg.measurement.c, &samples)?;
    println!("wrote {} samples to {}", samples.len(), path.display());
    Ok(())
}

/// Samples from `samples.json` in the data directory, else extracted from
/// the stored interferograms.
fn load_or_extract(ctx: &Ctx) -> Result<Vec<KSpaceSample<f64>>> {
    let path = ctx.loaded.data_dir(&ctx.out).join(format!("{SAMPLES_STEM}.json"));
    if path.exists() {
        return Ok(load_samples(&path).with_context(|| format!("reading {}", path.display()))?.1);
    }
    let dir = ctx.measurement_dir();
    let set = load_measurement_set::<f64>(&dir).with_context(|| format!("reading {}", dir.display()))?;
    extract_samples(ctx, &set)
}

#[derive(Serialize)]
struct InvertReport<'a> {
    status: &'static str,
    error: Option<String>,
    closed_form: bool,
    samples: usize,
    excluded: usize,
    coverage: Option<f64>,
    blocks: &'a [psoct::inverse::BlockReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    errors: Option<ComponentErrors>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentErrors {
    /// Relative ℓ² error against the continuum transform of the phantom.
    pub analytic: [f64; 4],
    /// Relative ℓ² error against the voxel transform of the rasterized phantom.
    pub discrete: [f64; 4],
}

fn run_inversion(ctx: &Ctx, spec: &PhantomSpec, samples: &[KSpaceSample<f64>]) -> Result<Reconstruction<f64>> {
    let grid = Grid::from_spec(&spec.grid)?;
    match reconstruct(grid, spec.chi0, samples, &ctx.loaded.rule(), &ctx.inversion()) {
        Err(e @ Error::Sampling { .. }) => {
            let report = InvertReport {
                status: "aborted",
                error: Some(e.to_string()),
                closed_form: false,
                samples: samples.len(),
                excluded: 0,
                coverage: None,
                blocks: &[],
                errors: None,
            };
            std::fs::create_dir_all(&ctx.out).ok();
            write_json(&ctx.out.join("invert_report.json"), &report)?;
            Err(e.into())
        }
        r => Ok(r?),
    }
}

fn finish(ctx: &Ctx, spec: &PhantomSpec, rec: &Reconstruction<f64>, errors: Option<ComponentErrors>, name: &str) -> Result<()> {
    let path = save_reconstruction(&ctx.out, spec.grid, spec.chi0, rec)?;
    let report = InvertReport {
        status: "ok",
        error: None,
        closed_form: rec.blocks.iter().all(|b| b.closed_form),
        samples: rec.points.len(),
        excluded: rec.excluded,
        coverage: rec.coverage,
        blocks: &rec.blocks,
        errors,
    };
    write_json(&ctx.out.join(format!("{name}_report.json")), &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("wrote {}", path.display());
    Ok(())
}

pub fn invert(ctx: &Ctx) -> Result<()> {
    let spec = ctx.loaded.phantom()?;
    let mut timings = Timings::default();
    let samples = timings.time("load", || load_or_extract(ctx))?;
    let rec = run_inversion(ctx, &spec, &samples)?;
    timings.0.extend(rec.timings.iter().cloned());
    finish(ctx, &spec, &rec, None, "invert")?;
    timings.write(&ctx.out.join("invert_timings.json"))
}

/// Relative ℓ² errors of each reconstructed component.
pub fn component_errors(spec: &PhantomSpec, rec: &Reconstruction<f64>) -> Result<ComponentErrors> {
    let sus = spec.rasterize::<f64>()?;
    let mut analytic = [0.0; 4];
    let mut discrete = [0.0; 4];
    let exact: Vec<[Complex<f64>; 4]> = rec.points.iter().map(|p| spec.analytic_transform(&p.v)).collect();
    for c in 0..4 {
        let got: Vec<Complex<f64>> = rec.psi.iter().map(|p| p[c]).collect();
        let a: Vec<Complex<f64>> = exact.iter().map(|e| e[c]).collect();
        let d = sample_transform(&sus.grid, &sus.psi[c], &rec.points)?;
        analytic[c] = psoct::linalg::rel_err(&got, &a);
        discrete[c] = psoct::linalg::rel_err(&got, &d);
    }
    Ok(ComponentErrors { analytic, discrete })
}

pub fn roundtrip(ctx: &Ctx) -> Result<()> {
    let spec = ctx.loaded.phantom()?;
    let mut timings = Timings::default();
    let set = simulate(ctx, &spec, &mut timings)?;
    let samples = timings.time("extract", || extract_samples(ctx, &set))?;
    let rec = run_inversion(ctx, &spec, &samples)?;
    timings.0.extend(rec.timings.iter().cloned());
    let errors = timings.time("compare", || component_errors(&spec, &rec))?;
    finish(ctx, &spec, &rec, Some(errors), "roundtrip")?;
    timings.write(&ctx.out.join("roundtrip_timings.json"))
}

