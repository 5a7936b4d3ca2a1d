//! Nonuniform reciprocal samples to a voxel field: trilinear binning onto the
//! DFT grid of the voxel lattice, then an inverse transform.
//!
//! The transform pair is `ψ̃(k) = Σ_y e^{−i⟨k,y⟩} ψ(y) h³` and
//! `ψ(y) = (M³h³)⁻¹ Σ_k ψ̃(k) e^{i⟨k,y⟩}` over `k = 2π m/(Mh)`.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::grid::VoxelGrid;
use crate::math::fourier::fft3;
use crate::math::vec3::{norm, Vec3};
use crate::scalar::{cis, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GriddingConfig {
    /// Reciprocal grid is `oversample · N` points per axis.
    #[serde(default = "one")]
    pub oversample: usize,
    /// Adds `(−v, conj ψ̃)` for every sample; right for real fields.
    #[serde(default = "yes")]
    pub hermitian: bool,
    /// Minimum fraction of shell cells that must receive data.
    #[serde(default)]
    pub min_coverage: f64,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl Default for GriddingConfig {
    fn default() -> Self {
        Self {
            oversample: 1,
            hermitian: true,
            min_coverage: 0.0,
        }
    }
}

/// Voxel field and the reciprocal coverage it was built from.
#[derive(Clone, Debug)]
pub struct GriddedField<T> {
    pub field: Vec<Complex<T>>,
    /// Filled cells over cells with `min|v| ≤ |k| ≤ max|v|`.
    pub coverage: f64,
    pub shell_cells: usize,
    pub filled_cells: usize,
}

/// Reciprocal lattice of `grid` refined by `oversample`.
#[derive(Clone, Copy, Debug)]
pub struct ReciprocalGrid<T> {
    pub m: [usize; 3],
    pub dk: [T; 3],
}

impl<T: Real> ReciprocalGrid<T> {
    pub fn new(grid: &VoxelGrid<T>, oversample: usize) -> Result<Self> {
        if oversample == 0 {
            return Err(Error::InvalidArgument("oversample must be ≥ 1".into()));
        }
        let m = [grid.n[0] * oversample, grid.n[1] * oversample, grid.n[2] * oversample];
        let dk = [0, 1, 2].map(|d| T::TAU() / (lit::<T>(m[d] as f64) * grid.h));
        Ok(Self { m, dk })
    }

    pub fn len(&self) -> usize {
        self.m[0] * self.m[1] * self.m[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Signed frequency index stored at FFT position `i`.
    fn signed(i: usize, m: usize) -> i64 {
        if i < m.div_ceil(2) {
            i as i64
        } else {
            i as i64 - m as i64
        }
    }

    fn slot(m: i64, size: usize) -> Option<usize> {
        let lo = -((size / 2) as i64);
        let hi = (size as i64 - 1) / 2;
        if m < lo || m > hi {
            None
        } else {
            Some(m.rem_euclid(size as i64) as usize)
        }
    }

    /// `k` at FFT position `(i₀, i₁, i₂)`.
    pub fn wavevector(&self, idx: [usize; 3]) -> Vec3<T> {
        [0, 1, 2].map(|d| lit::<T>(Self::signed(idx[d], self.m[d]) as f64) * self.dk[d])
    }

    fn flat(&self, i: [usize; 3]) -> usize {
        (i[0] * self.m[1] + i[1]) * self.m[2] + i[2]
    }
}

/// Bins `values` at reciprocal points `vs` and transforms back to `grid`.
pub fn grid_and_invert<T: Real>(
    grid: &VoxelGrid<T>,
    vs: &[Vec3<T>],
    values: &[Complex<T>],
    cfg: &GriddingConfig,
) -> Result<GriddedField<T>> {
    if vs.len() != values.len() {
        return Err(Error::Shape(format!("{} sample points, {} values", vs.len(), values.len())));
    }
    let rg = ReciprocalGrid::new(grid, cfg.oversample)?;
    let mut acc = vec![Complex::<T>::zero(); rg.len()];
    let mut wsum = vec![T::zero(); rg.len()];
    let mut deposit = |v: &Vec3<T>, val: Complex<T>| {
        let mut base = [0i64; 3];
        let mut frac = [T::zero(); 3];
        for d in 0..3 {
            let f = v[d] / rg.dk[d];
            let fl = f.floor();
            base[d] = fl.to_i64().unwrap_or(i64::MAX / 2);
            frac[d] = f - fl;
        }
        for corner in 0..8 {
            let mut w = T::one();
            let mut idx = [0usize; 3];
            let mut inside = true;
            for d in 0..3 {
                let up = (corner >> d) & 1 == 1;
                w *= if up { frac[d] } else { T::one() - frac[d] };
                match ReciprocalGrid::<T>::slot(base[d] + up as i64, rg.m[d]) {
                    Some(s) => idx[d] = s,
                    None => inside = false,
                }
            }
            if inside && w > T::zero() {
                let f = rg.flat(idx);
                acc[f] += val * w;
                wsum[f] += w;
            }
        }
    };
    for (v, &val) in vs.iter().zip(values) {
        deposit(v, val);
        if cfg.hermitian {
            deposit(&[-v[0], -v[1], -v[2]], val.conj());
        }
    }
    let (rmin, rmax) = vs.iter().fold((T::infinity(), T::zero()), |(lo, hi), v| {
        let r = norm(v);
        (lo.min(r), hi.max(r))
    });
    let x0 = grid.center(0);
    let mut spec = vec![Complex::<T>::zero(); rg.len()];
    let mut shell = 0usize;
    let mut filled = 0usize;
    for i0 in 0..rg.m[0] {
        for i1 in 0..rg.m[1] {
            for i2 in 0..rg.m[2] {
                let idx = [i0, i1, i2];
                let f = rg.flat(idx);
                let k = rg.wavevector(idx);
                let r = norm(&k);
                let has = wsum[f] > T::zero();
                if !vs.is_empty() && r >= rmin && r <= rmax {
                    shell += 1;
                    if has {
                        filled += 1;
                    }
                }
                if has {
                    let phase = cis(k[0] * x0[0] + k[1] * x0[1] + k[2] * x0[2]);
                    spec[f] = acc[f] / wsum[f] * phase;
                }
            }
        }
    }
    let coverage = if shell > 0 { filled as f64 / shell as f64 } else { 0.0 };
    if coverage < cfg.min_coverage {
        return Err(Error::Coverage {
            coverage,
            required: cfg.min_coverage,
        });
    }
    fft3(&mut spec, rg.m, true);
    let scale = T::one() / (lit::<T>(rg.len() as f64) * grid.weight());
    let mut field = vec![Complex::zero(); grid.len()];
    for (idx, out) in field.iter_mut().enumerate() {
        let j = grid.multi_index(idx);
        *out = spec[rg.flat(j)] * scale;
    }
    Ok(GriddedField {
        field,
        coverage,
        shell_cells: shell,
        filled_cells: filled,
    })
}

/// Inverse transform of a full reciprocal spectrum given as a function of
/// `k`, restricted to `mask`; the reference for band-limited comparisons.
pub fn band_limited<T: Real>(
    grid: &VoxelGrid<T>,
    oversample: usize,
    spectrum: impl Fn(&Vec3<T>) -> Complex<T>,
    mask: impl Fn(&Vec3<T>) -> bool,
) -> Result<Vec<Complex<T>>> {
    let rg = ReciprocalGrid::new(grid, oversample)?;
    let x0 = grid.center(0);
    let mut spec = vec![Complex::<T>::zero(); rg.len()];
    for i0 in 0..rg.m[0] {
        for i1 in 0..rg.m[1] {
            for i2 in 0..rg.m[2] {
                let idx = [i0, i1, i2];
                let k = rg.wavevector(idx);
                if mask(&k) {
                    spec[rg.flat(idx)] = spectrum(&k) * cis(k[0] * x0[0] + k[1] * x0[1] + k[2] * x0[2]);
                }
            }
        }
    }
    fft3(&mut spec, rg.m, true);
    let scale = T::one() / (lit::<T>(rg.len() as f64) * grid.weight());
    Ok((0..grid.len()).map(|i| spec[rg.flat(grid.multi_index(i))] * scale).collect())
}
