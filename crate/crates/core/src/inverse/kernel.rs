//! Discrete kernels `𝒦` and `𝒦†` between reciprocal samples.
//!
//! Unknowns live on the sample points themselves. A spatial field is
//! recovered from its samples `ψ̃_b` by the minimum-norm interpolant
//! `ψ(z) = Σ_b E⁺[z,b] ψ̃_b`, where `E[b,z] = e^{−i⟨v_b,z⟩} h³` and `E⁺` is
//! its truncated pseudo-inverse. With that, for sample `a` at `(k, ϑ)`:
//!
//! `𝒦[ψ̃]_a = Σ_b Qz_ab ψ̃_b`, `Qz_ab = Σ_z R_a(z) E⁺[z,b]`,
//! `R_a(z) = k² h³ Σ_y e^{−ik⟨ϑ,y⟩} A(y,z) e^{−ikz₃}`;
//!
//! `𝒦†[ψ̃]_a = Σ_b ψ̃_b Qy_ab`, `Qy_ab = k² h³ Σ_y e^{−ik⟨ϑ,y⟩} U(y) E⁺[y,b]`,
//! `U(y) = Σ_z A(y,z) e^{−ikz₃}`.

use log::debug;
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::grid::{SelfCellRule, VoxelGrid};
use crate::forward::operator::GreenOperator;
use crate::forward::susceptibility::{background_pattern, orthotropic};
use crate::inverse::sampling::SamplePoint;
use crate::linalg::CMatrix;
use crate::math::vec3::{dot, madd, mmul, mscale, mzero, CMat3};
use crate::scalar::{cis, re, Real};

/// Default relative singular-value cut of the interpolant.
pub const DEFAULT_RCOND: f64 = 2e-2;

const SYM: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Truncated pseudo-inverse of the sampled Fourier transform on a grid.
pub struct Interpolator<T> {
    grid: VoxelGrid<T>,
    /// `E⁺`, voxels × samples.
    eplus: CMatrix<T>,
    rank: usize,
    singular_values: Vec<T>,
}

fn fourier_matrix<T: Real>(grid: &VoxelGrid<T>, points: &[SamplePoint<T>]) -> CMatrix<T> {
    let centers = grid.centers();
    let w = grid.weight();
    CMatrix::from_fn(points.len(), centers.len(), |b, z| cis(-dot(&points[b].v, &centers[z])) * w)
}

impl<T: Real> Interpolator<T> {
    /// Keeps singular values above `rcond · s_max`. The cut is applied to the
    /// eigenvalues of `EEᴴ`, so `rcond` below `√ε` is rejected.
    pub fn tsvd(grid: VoxelGrid<T>, points: &[SamplePoint<T>], rcond: T) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("no sample points to interpolate"));
        }
        if !(rcond >= T::epsilon().sqrt() && rcond < T::one()) {
            return Err(Error::InvalidArgument(format!("rcond must lie in [√ε, 1), got {rcond}")));
        }
        let e = fourier_matrix(&grid, points);
        let gram = e.matmul(&e.adjoint());
        let (lambda, u) = T::hermitian_eigen(&gram);
        let n = points.len();
        let lmax = lambda[n - 1].max(T::zero());
        if !(lmax > T::zero()) {
            return Err(Error::Singularity);
        }
        let cut = rcond * rcond * lmax;
        let keep: Vec<usize> = (0..n).filter(|&i| lambda[i] > cut).collect();
        // W = U_r Λ_r⁻¹ U_rᴴ
        let w = CMatrix::from_fn(n, n, |i, j| {
            keep.iter()
                .map(|&r| u[(i, r)] * u[(j, r)].conj() / lambda[r])
                .sum::<Complex<T>>()
        });
        let eplus = e.adjoint().matmul(&w);
        let mut singular_values: Vec<T> = lambda.iter().rev().map(|l| l.max(T::zero()).sqrt()).collect();
        singular_values.truncate(n);
        debug!("interpolant rank {} of {}", keep.len(), n);
        Ok(Self {
            grid,
            eplus,
            rank: keep.len(),
            singular_values,
        })
    }

    pub fn grid(&self) -> &VoxelGrid<T> {
        &self.grid
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Singular values of `E`, descending.
    pub fn singular_values(&self) -> &[T] {
        &self.singular_values
    }

    pub fn samples(&self) -> usize {
        self.eplus.cols()
    }

    /// `E⁺`, voxels × samples.
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.eplus
    }

    /// Spatial field from its samples.
    pub fn to_space(&self, values: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if values.len() != self.samples() {
            return Err(Error::Shape(format!(
                "{} sample values for an interpolant over {} samples",
                values.len(),
                self.samples()
            )));
        }
        Ok(self.eplus.matvec(values))
    }
}

/// Dense `n × n` tables of 3×3 blocks `Qz_ab` and `Qy_ab`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTable<T> {
    n: usize,
    qz: Vec<CMat3<T>>,
    qy: Vec<CMat3<T>>,
}

impl<T: Real> KernelTable<T> {
    /// Tables from explicit blocks in row-major `(a, b)` order.
    pub fn from_blocks(n: usize, qz: Vec<CMat3<T>>, qy: Vec<CMat3<T>>) -> Result<Self> {
        if qz.len() != n * n || qy.len() != n * n {
            return Err(Error::Shape(format!(
                "kernel tables need {} blocks, got {} and {}",
                n * n,
                qz.len(),
                qy.len()
            )));
        }
        Ok(Self { n, qz, qy })
    }

    /// Zero kernels: the decoupled case.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            qz: vec![mzero(); n * n],
            qy: vec![mzero(); n * n],
        }
    }

    /// Tables consistent with the forward quadrature on `interp`'s grid.
    pub fn assemble(points: &[SamplePoint<T>], interp: &Interpolator<T>, rule: &dyn SelfCellRule<T>) -> Result<Self> {
        let n = points.len();
        if interp.samples() != n {
            return Err(Error::Shape("interpolant and sample set differ in size".into()));
        }
        let grid = *interp.grid();
        let centers = grid.centers();
        let nv = centers.len();
        let h3 = grid.weight();
        let ep = interp.matrix();
        let mut qz = vec![mzero(); n * n];
        let mut qy = vec![mzero(); n * n];
        let mut ks: Vec<T> = Vec::new();
        for p in points {
            if !ks.contains(&p.k) {
                ks.push(p.k);
            }
        }
        for k in ks {
            let op = GreenOperator::new(grid, k, rule)?;
            let ez: Vec<Complex<T>> = centers.iter().map(|x| cis(-k * x[2])).collect();
            let u = op.apply_scalar(&ez)?;
            let members: Vec<usize> = (0..n).filter(|&a| points[a].k == k).collect();
            let rows: Vec<(usize, Vec<CMat3<T>>, Vec<CMat3<T>>)> = members
                .par_iter()
                .map(|&a| {
                    let t = points[a].theta.theta();
                    let ey: Vec<Complex<T>> = centers.iter().map(|x| cis(-k * dot(&t, x))).collect();
                    let s = re(k * k * h3);
                    let rz = op.apply_scalar(&ey)?;
                    // 12 symmetric entries per voxel: six of R_a, six of the 𝒦† integrand
                    let mut vals = vec![Complex::<T>::zero(); nv * 12];
                    for z in 0..nv {
                        let wz = ez[z] * s;
                        let wy = ey[z] * s;
                        for (m, &(i, j)) in SYM.iter().enumerate() {
                            vals[z * 12 + m] = rz[z][i][j] * wz;
                            vals[z * 12 + 6 + m] = u[z][i][j] * wy;
                        }
                    }
                    let mut acc = vec![Complex::<T>::zero(); 12 * n];
                    for z in 0..nv {
                        let erow = ep.row(z);
                        for m in 0..12 {
                            let r = vals[z * 12 + m];
                            if r.is_zero() {
                                continue;
                            }
                            for (o, e) in acc[m * n..(m + 1) * n].iter_mut().zip(erow) {
                                *o += r * e;
                            }
                        }
                    }
                    let mut bz = vec![mzero(); n];
                    let mut by = vec![mzero(); n];
                    for b in 0..n {
                        for (m, &(i, j)) in SYM.iter().enumerate() {
                            bz[b][i][j] = acc[m * n + b];
                            bz[b][j][i] = acc[m * n + b];
                            by[b][i][j] = acc[(6 + m) * n + b];
                            by[b][j][i] = acc[(6 + m) * n + b];
                        }
                    }
                    Ok((a, bz, by))
                })
                .collect::<Result<_>>()?;
            for (a, bz, by) in rows {
                qz[a * n..(a + 1) * n].copy_from_slice(&bz);
                qy[a * n..(a + 1) * n].copy_from_slice(&by);
            }
        }
        Ok(Self { n, qz, qy })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn qz(&self, a: usize, b: usize) -> &CMat3<T> {
        &self.qz[a * self.n + b]
    }

    pub fn qy(&self, a: usize, b: usize) -> &CMat3<T> {
        &self.qy[a * self.n + b]
    }

    /// Restriction to the sample subset `idx`.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut qz = Vec::with_capacity(m * m);
        let mut qy = Vec::with_capacity(m * m);
        for &a in idx {
            for &b in idx {
                qz.push(*self.qz(a, b));
                qy.push(*self.qy(a, b));
            }
        }
        Self { n: m, qz, qy }
    }

    /// `Y_a = ψ̃_a + χ₀ B 𝒦[ψ̃]_a + χ₀ 𝒦†[ψ̃]_a B` for samples `y_b = (ψ̃₁₁, ψ̃₁₂, ψ̃₂₂, ψ̃₃₃)`.
    pub fn y_action(&self, chi0: T, y: &[[Complex<T>; 4]]) -> Result<Vec<CMat3<T>>> {
        if y.len() != self.n {
            return Err(Error::Shape(format!("{} unknowns for {} samples", y.len(), self.n)));
        }
        let bmat = background_pattern::<T>();
        let psi: Vec<CMat3<T>> = y.iter().map(|c| orthotropic(*c)).collect();
        let c0 = re(chi0);
        Ok((0..self.n)
            .into_par_iter()
            .map(|a| {
                let mut kz = mzero();
                let mut ky = mzero();
                for b in 0..self.n {
                    kz = madd(&kz, &mmul(self.qz(a, b), &psi[b]));
                    ky = madd(&ky, &mmul(&psi[b], self.qy(a, b)));
                }
                let t = madd(&mmul(&bmat, &kz), &mmul(&ky, &bmat));
                madd(&psi[a], &mscale(&t, c0))
            })
            .collect())
    }
}

/// Sampled transform `Σ_y e^{−i⟨v,y⟩} ψ(y) h³` of a voxel field at every point.
pub fn sample_transform<T: Real>(grid: &VoxelGrid<T>, field: &[Complex<T>], points: &[SamplePoint<T>]) -> Result<Vec<Complex<T>>> {
    if field.len() != grid.len() {
        return Err(Error::GridMismatch {
            expected: grid.len(),
            got: field.len(),
        });
    }
    let centers = grid.centers();
    let w = grid.weight();
    Ok(points
        .par_iter()
        .map(|p| {
            centers
                .iter()
                .zip(field)
                .map(|(x, f)| *f * cis(-dot(&p.v, x)))
                .sum::<Complex<T>>()
                * w
        })
        .collect())
}

/// Relative Frobenius difference of two block tables, for diagnostics.
pub fn table_difference<T: Real>(a: &KernelTable<T>, b: &KernelTable<T>) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for (x, y) in a.qz.iter().chain(&a.qy).zip(b.qz.iter().chain(&b.qy)) {
        for i in 0..3 {
            for j in 0..3 {
                num += (x[i][j] - y[i][j]).norm_sqr();
                den += y[i][j].norm_sqr();
            }
        }
    }
    if den > T::zero() {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}
