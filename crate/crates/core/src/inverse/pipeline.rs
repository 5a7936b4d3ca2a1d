//! Measured `m̃` samples to `ψ̃` at the sample points, and optionally to voxels.

use std::time::Instant;

use log::info;
use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::grid::{SelfCellRule, VoxelGrid};
use crate::inverse::gridding::{grid_and_invert, GriddingConfig};
use crate::inverse::kernel::{Interpolator, KernelTable, DEFAULT_RCOND};
use crate::inverse::reduced::{m3_matrix, psi33_rhs, ReducedSystem};
use crate::inverse::sampling::{Admissibility, SamplePoint, SampleSet};
use crate::inverse::solve::{solve_psi33, solve_second_kind, Regularization, DEFAULT_RESIDUAL_TOL};
use crate::measurement::KSpaceSample;
use crate::scalar::{lit, Real};

/// Whether samples of all frequencies enter one system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Stacked,
    PerFrequency,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    #[serde(default = "default_rcond")]
    pub rcond: f64,
    #[serde(default)]
    pub admissibility: Admissibility,
    #[serde(default = "default_mode")]
    pub mode: SolveMode,
    #[serde(default = "default_tol")]
    pub residual_tol: f64,
    #[serde(default)]
    pub regularization: Regularization,
    /// Also solve the first-kind equation for `ψ̃₃₃`.
    #[serde(default = "yes")]
    pub psi33: bool,
    /// Abort when more than this fraction of samples is excluded.
    #[serde(default = "default_excluded")]
    pub max_excluded_fraction: f64,
    #[serde(default)]
    pub gridding: Option<GriddingConfig>,
}

fn default_rcond() -> f64 {
    DEFAULT_RCOND
}
fn default_mode() -> SolveMode {
    SolveMode::Stacked
}
fn default_tol() -> f64 {
    DEFAULT_RESIDUAL_TOL
}
fn yes() -> bool {
    true
}
fn default_excluded() -> f64 {
    0.5
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            rcond: DEFAULT_RCOND,
            admissibility: Admissibility::default(),
            mode: SolveMode::Stacked,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            regularization: Regularization::Default,
            psi33: true,
            max_excluded_fraction: 0.5,
            gridding: None,
        }
    }
}

/// Per-block diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockReport {
    pub wavenumbers: Vec<f64>,
    pub samples: usize,
    pub interpolant_rank: usize,
    pub residual: f64,
    pub pivot_ratio: f64,
    pub closed_form: bool,
    pub lambda: Option<f64>,
    pub psi33_residual: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Reconstruction<T> {
    pub points: Vec<SamplePoint<T>>,
    /// `(ψ̃₁₁, ψ̃₁₂, ψ̃₂₂, ψ̃₃₃)` per retained sample; `ψ̃₃₃` is zero when not solved.
    pub psi: Vec<[Complex<T>; 4]>,
    pub psi33_solved: bool,
    pub blocks: Vec<BlockReport>,
    pub excluded: usize,
    /// Voxel fields per component, when gridding was requested.
    pub spatial: Option<[Vec<Complex<T>>; 4]>,
    pub coverage: Option<f64>,
    pub timings: Vec<(String, f64)>,
}

fn to64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

struct Block<T> {
    psi: Vec<[Complex<T>; 4]>,
    report: BlockReport,
}

fn solve_block<T: Real>(
    grid: VoxelGrid<T>,
    chi0: T,
    points: &[SamplePoint<T>],
    samples: &[&KSpaceSample<T>],
    rule: &dyn SelfCellRule<T>,
    cfg: &InversionConfig,
    timings: &mut Vec<(String, f64)>,
) -> Result<Block<T>> {
    let n = points.len();
    let mut ks: Vec<f64> = points.iter().map(|p| to64(p.k)).collect();
    ks.dedup();
    let t0 = Instant::now();
    let (table, rank) = if chi0 == T::zero() {
        (KernelTable::zeros(n), 0)
    } else {
        let interp = Interpolator::tsvd(grid, points, lit(cfg.rcond))?;
        let table = KernelTable::assemble(points, &interp, rule)?;
        (table, interp.rank())
    };
    timings.push(("kernel tables".into(), t0.elapsed().as_secs_f64()));
    let t1 = Instant::now();
    let sys = ReducedSystem::from_measurements(points, &table, chi0, samples)?;
    let sol = solve_second_kind(&sys, lit(cfg.residual_tol))?;
    timings.push(("second-kind solve".into(), t1.elapsed().as_secs_f64()));
    let mut psi: Vec<[Complex<T>; 4]> = sol.y.iter().map(|y| [y[0], y[1], y[2], Complex::zero()]).collect();
    let mut lambda = None;
    let mut psi33_residual = None;
    if cfg.psi33 && chi0 != T::zero() {
        let t2 = Instant::now();
        let rhs = psi33_rhs(points, &table, chi0, &sol.y, &sys.b)?;
        let t = solve_psi33(&m3_matrix(&table), &rhs, &cfg.regularization)?;
        for (p, v) in psi.iter_mut().zip(&t.y) {
            p[3] = *v;
        }
        lambda = Some(to64(t.lambda));
        psi33_residual = Some(to64(t.residual_norm));
        timings.push(("first-kind solve".into(), t2.elapsed().as_secs_f64()));
    }
    Ok(Block {
        psi,
        report: BlockReport {
            wavenumbers: ks,
            samples: n,
            interpolant_rank: rank,
            residual: to64(sol.residual),
            pivot_ratio: to64(sol.pivot_ratio),
            closed_form: sol.closed_form,
            lambda,
            psi33_residual,
        },
    })
}

/// Reconstructs `ψ̃` on the admissible samples. The kernel tables use
/// `grid` and `rule`, which should match the forward model.
pub fn reconstruct<T: Real>(
    grid: VoxelGrid<T>,
    chi0: T,
    samples: &[KSpaceSample<T>],
    rule: &dyn SelfCellRule<T>,
    cfg: &InversionConfig,
) -> Result<Reconstruction<T>> {
    if !(cfg.rcond > 0.0 && cfg.rcond < 1.0) {
        return Err(Error::InvalidArgument(format!("rcond must lie in (0, 1), got {}", cfg.rcond)));
    }
    let (set, kept) = SampleSet::from_measurements(samples, &cfg.admissibility)?;
    if set.excluded_fraction() > cfg.max_excluded_fraction {
        return Err(Error::Sampling {
            constraint: "excluded-sample fraction",
            detail: format!(
                "{} of {} samples excluded (limit {:.0}%)",
                set.excluded.len(),
                samples.len(),
                100.0 * cfg.max_excluded_fraction
            ),
        });
    }
    let mut timings = Vec::new();
    let n = set.len();
    let kept_samples: Vec<&KSpaceSample<T>> = kept.iter().map(|&i| &samples[i]).collect();
    let groups: Vec<Vec<usize>> = match cfg.mode {
        SolveMode::Stacked => vec![(0..n).collect()],
        SolveMode::PerFrequency => set.wavenumbers().into_iter().map(|k| set.with_wavenumber(k).1).collect(),
    };
    let mut psi = vec![[Complex::zero(); 4]; n];
    let mut blocks = Vec::new();
    for g in &groups {
        let pts: Vec<SamplePoint<T>> = g.iter().map(|&i| set.points[i]).collect();
        let sm: Vec<&KSpaceSample<T>> = g.iter().map(|&i| kept_samples[i]).collect();
        let b = solve_block(grid, chi0, &pts, &sm, rule, cfg, &mut timings)?;
        for (&i, v) in g.iter().zip(b.psi) {
            psi[i] = v;
        }
        info!(
            "block of {} samples: residual {:.3e}, rank {}",
            b.report.samples, b.report.residual, b.report.interpolant_rank
        );
        blocks.push(b.report);
    }
    let psi33_solved = cfg.psi33 && chi0 != T::zero();
    let (spatial, coverage) = match &cfg.gridding {
        Some(gc) => {
            let t = Instant::now();
            let vs: Vec<_> = set.points.iter().map(|p| p.v).collect();
            let mut fields: [Vec<Complex<T>>; 4] = Default::default();
            let mut cov = 0.0;
            for (c, f) in fields.iter_mut().enumerate() {
                let vals: Vec<Complex<T>> = psi.iter().map(|p| p[c]).collect();
                let g = grid_and_invert(&grid, &vs, &vals, gc)?;
                cov = g.coverage;
                *f = g.field;
            }
            timings.push(("gridding".into(), t.elapsed().as_secs_f64()));
            (Some(fields), Some(cov))
        }
        None => (None, None),
    };
    Ok(Reconstruction {
        points: set.points,
        psi,
        psi33_solved,
        blocks,
        excluded: set.excluded.len(),
        spatial,
        coverage,
        timings,
    })
}
