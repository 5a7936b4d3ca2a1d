//! Discrete volume-integral operator `g ↦ Σ_z A(y,z) g(z)` with the dyadic
//! kernel, evaluated as a linear convolution on a zero-padded grid.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forward::grid::{SelfCellRule, VoxelGrid};
use crate::math::fourier::fft3;
use crate::math::green::dyadic_green;
use crate::math::vec3::{mvec, mzero, CMat3, CVec3};
use crate::scalar::{lit, Real};

/// Storage order of the six independent entries of a symmetric 3×3 matrix.
const SYM: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn sym_slot(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    SYM.iter().position(|&p| p == (a, b)).expect("valid index pair")
}

/// Kernel `A(y,z)`: `𝐆(k, y−z) h³` off the diagonal, the self-cell rule on it.
pub struct GreenOperator<T> {
    grid: VoxelGrid<T>,
    k: T,
    diagonal: CMat3<T>,
    padded: [usize; 3],
    kernel_hat: Vec<Vec<Complex<T>>>,
}

impl<T: Real> GreenOperator<T> {
    pub fn new(grid: VoxelGrid<T>, k: T, rule: &dyn SelfCellRule<T>) -> Result<Self> {
        if !(k > T::zero()) {
            return Err(Error::ZeroFrequency("volume-integral operator"));
        }
        let padded = [2 * grid.n[0], 2 * grid.n[1], 2 * grid.n[2]];
        let size = padded[0] * padded[1] * padded[2];
        let diagonal = rule.diagonal(k, grid.h);
        let w = grid.weight();
        let mut tables = vec![vec![Complex::<T>::zero(); size]; 6];
        let n = grid.n;
        for d0 in -(n[0] as i64 - 1)..n[0] as i64 {
            for d1 in -(n[1] as i64 - 1)..n[1] as i64 {
                for d2 in -(n[2] as i64 - 1)..n[2] as i64 {
                    let m = if d0 == 0 && d1 == 0 && d2 == 0 {
                        diagonal
                    } else {
                        let x = [
                            lit::<T>(d0 as f64) * grid.h,
                            lit::<T>(d1 as f64) * grid.h,
                            lit::<T>(d2 as f64) * grid.h,
                        ];
                        let mut g = dyadic_green(k, &x)?;
                        for row in g.iter_mut() {
                            for e in row.iter_mut() {
                                *e = *e * w;
                            }
                        }
                        g
                    };
                    let i0 = d0.rem_euclid(padded[0] as i64) as usize;
                    let i1 = d1.rem_euclid(padded[1] as i64) as usize;
                    let i2 = d2.rem_euclid(padded[2] as i64) as usize;
                    let idx = (i0 * padded[1] + i1) * padded[2] + i2;
                    for (s, &(a, b)) in SYM.iter().enumerate() {
                        tables[s][idx] = m[a][b];
                    }
                }
            }
        }
        for t in tables.iter_mut() {
            fft3(t, padded, false);
        }
        Ok(Self {
            grid,
            k,
            diagonal,
            padded,
            kernel_hat: tables,
        })
    }

    pub fn grid(&self) -> &VoxelGrid<T> {
        &self.grid
    }

    pub fn wavenumber(&self) -> T {
        self.k
    }

    /// `A(y,z)` evaluated directly, for checks against the convolution.
    pub fn entry(&self, y: usize, z: usize) -> Result<CMat3<T>> {
        if y == z {
            return Ok(self.diagonal);
        }
        let a = self.grid.center(y);
        let b = self.grid.center(z);
        let mut g = dyadic_green(self.k, &[a[0] - b[0], a[1] - b[1], a[2] - b[2]])?;
        let w = self.grid.weight();
        for row in g.iter_mut() {
            for e in row.iter_mut() {
                *e = *e * w;
            }
        }
        Ok(g)
    }

    fn pad(&self, f: impl Fn(usize) -> Complex<T>) -> Vec<Complex<T>> {
        let p = self.padded;
        let n = self.grid.n;
        let mut out = vec![Complex::zero(); p[0] * p[1] * p[2]];
        for i0 in 0..n[0] {
            for i1 in 0..n[1] {
                for i2 in 0..n[2] {
                    out[(i0 * p[1] + i1) * p[2] + i2] = f(self.grid.index([i0, i1, i2]));
                }
            }
        }
        fft3(&mut out, p, false);
        out
    }

    fn unpad(&self, mut data: Vec<Complex<T>>) -> Vec<Complex<T>> {
        let p = self.padded;
        let n = self.grid.n;
        fft3(&mut data, p, true);
        let scale = T::one() / lit::<T>((p[0] * p[1] * p[2]) as f64);
        let mut out = vec![Complex::zero(); self.grid.len()];
        for i0 in 0..n[0] {
            for i1 in 0..n[1] {
                for i2 in 0..n[2] {
                    out[self.grid.index([i0, i1, i2])] = data[(i0 * p[1] + i1) * p[2] + i2] * scale;
                }
            }
        }
        out
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.grid.len() {
            return Err(Error::GridMismatch {
                expected: self.grid.len(),
                got,
            });
        }
        Ok(())
    }

    /// `Σ_z A(y,z) f(z)` for a vector field.
    pub fn apply(&self, f: &[CVec3<T>]) -> Result<Vec<CVec3<T>>> {
        self.check_len(f.len())?;
        let fh: Vec<Vec<Complex<T>>> = (0..3).map(|c| self.pad(|i| f[i][c])).collect();
        let mut out = vec![[Complex::zero(); 3]; f.len()];
        for i in 0..3 {
            let mut acc = vec![Complex::zero(); fh[0].len()];
            for (j, fj) in fh.iter().enumerate() {
                let kh = &self.kernel_hat[sym_slot(i, j)];
                for ((a, k), x) in acc.iter_mut().zip(kh).zip(fj) {
                    *a += k * x;
                }
            }
            for (o, v) in out.iter_mut().zip(self.unpad(acc)) {
                o[i] = v;
            }
        }
        Ok(out)
    }

    /// `Σ_z A(y,z) f(z)` for a scalar field; one 3×3 matrix per voxel.
    pub fn apply_scalar(&self, f: &[Complex<T>]) -> Result<Vec<CMat3<T>>> {
        self.check_len(f.len())?;
        let fh = self.pad(|i| f[i]);
        let mut out = vec![mzero(); f.len()];
        for (s, &(a, b)) in SYM.iter().enumerate() {
            let prod: Vec<Complex<T>> = self.kernel_hat[s].iter().zip(&fh).map(|(k, x)| k * x).collect();
            for (o, v) in out.iter_mut().zip(self.unpad(prod)) {
                o[a][b] = v;
                o[b][a] = v;
            }
        }
        Ok(out)
    }

    /// Direct `O(n²)` evaluation of [`apply`](Self::apply), for tests.
    pub fn apply_direct(&self, f: &[CVec3<T>]) -> Result<Vec<CVec3<T>>> {
        self.check_len(f.len())?;
        let mut out = vec![[Complex::zero(); 3]; f.len()];
        for (y, o) in out.iter_mut().enumerate() {
            for (z, fz) in f.iter().enumerate() {
                let a = self.entry(y, z)?;
                let v = mvec(&a, fz);
                for c in 0..3 {
                    o[c] += v[c];
                }
            }
        }
        Ok(out)
    }
}
