//! Dense complex matrices and the factorizations used by the solvers.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

/// Result of [`Real::lu_solve`].
#[derive(Clone, Debug)]
pub struct LuSolution<T> {
    pub x: Vec<Complex<T>>,
    /// Smallest pivot magnitude relative to the largest one.
    pub pivot_ratio: T,
}

/// `a = u · diag(s) · vh`, with `s` descending.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: CMatrix<T>,
    pub s: Vec<T>,
    pub vh: CMatrix<T>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `selfᴴ x`.
    pub fn adjoint_matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Complex::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `‖a − b‖ / ‖b‖`; zero when both vanish.
pub fn rel_err<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    assert_eq!(a.len(), b.len());
    let num = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<T>()
        .sqrt();
    let den = norm2(b);
    if den.is_zero() {
        num
    } else {
        num / den
    }
}

pub(crate) mod backend {
    use nalgebra::{ComplexField, DMatrix, DVector, RealField};
    use num_complex::Complex;

    use super::{CMatrix, LuSolution, Svd};
    use crate::scalar::Real;

    fn to_na<T: Real + RealField + Copy>(a: &CMatrix<T>) -> DMatrix<Complex<T>> {
        DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
    }

    fn from_na<T: Real + RealField + Copy>(m: &DMatrix<Complex<T>>) -> CMatrix<T> {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn lu_solve<T: Real + RealField + Copy>(
        a: &CMatrix<T>,
        b: &[Complex<T>],
    ) -> Option<LuSolution<T>> {
        assert_eq!(a.rows(), a.cols(), "lu_solve needs a square matrix");
        assert_eq!(b.len(), a.rows());
        let lu = to_na(a).lu();
        let u = lu.u();
        let diag: Vec<T> = (0..u.nrows()).map(|i| ComplexField::modulus(u[(i, i)])).collect();
        let max = diag.iter().copied().fold(T::zero(), |m, d| if d > m { d } else { m });
        let min = diag.iter().copied().fold(max, |m, d| if d < m { d } else { m });
        let x = lu.solve(&DVector::from_column_slice(b))?;
        let pivot_ratio = if max > T::zero() { min / max } else { T::zero() };
        Some(LuSolution {
            x: x.iter().copied().collect(),
            pivot_ratio,
        })
    }

    pub fn hermitian_eigen<T: Real + RealField + Copy>(a: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
        let eig = to_na(a).symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let n = a.rows();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vectors)
    }

    pub fn svd<T: Real + RealField + Copy>(a: &CMatrix<T>) -> Svd<T> {
        let svd = to_na(a).svd(true, true);
        let s: Vec<T> = svd.singular_values.iter().copied().collect();
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal));
        let u = svd.u.expect("requested U");
        let vt = svd.v_t.expect("requested Vᴴ");
        let u = from_na(&u);
        let vt = from_na(&vt);
        Svd {
            u: CMatrix::from_fn(u.rows(), order.len(), |i, j| u[(i, order[j])]),
            s: order.iter().map(|&i| s[i]).collect(),
            vh: CMatrix::from_fn(order.len(), vt.cols(), |i, j| vt[(order[i], j)]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn lu_solves_small_system() {
        let a = CMatrix::from_vec(2, 2, vec![c(2.0, 1.0), c(0.0, 1.0), c(1.0, 0.0), c(3.0, -1.0)]);
        let x_true = vec![c(1.0, -2.0), c(0.5, 0.25)];
        let b = a.matvec(&x_true);
        let sol = f64::lu_solve(&a, &b).unwrap();
        assert!(rel_err(&sol.x, &x_true) < 1e-14);
        assert!(sol.pivot_ratio > 0.0);
    }

    #[test]
    fn singular_matrix_reports_none_or_tiny_pivot() {
        let a = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        match f64::lu_solve(&a, &[c(1.0, 0.0), c(0.0, 0.0)]) {
            None => {}
            Some(s) => assert!(s.pivot_ratio < 1e-15),
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let a = CMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.5, 0.5),
                c(0.0, -1.0),
                c(0.5, -0.5),
                c(1.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 1.0),
                c(0.25, 0.0),
                c(3.0, 0.0),
            ],
        );
        let (w, v) = f64::hermitian_eigen(&a);
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
        let d = CMatrix::from_fn(3, 3, |i, j| if i == j { c(w[i], 0.0) } else { c(0.0, 0.0) });
        let back = v.matmul(&d).matmul(&v.adjoint());
        assert!(rel_err(back.as_slice(), a.as_slice()) < 1e-13);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        let a = CMatrix::from_fn(4, 3, |i, j| c((i + 2 * j) as f64, (i as f64 - j as f64) * 0.5));
        let svd = f64::svd(&a);
        assert!(svd.s.windows(2).all(|p| p[0] >= p[1]));
        let k = svd.s.len();
        let d = CMatrix::from_fn(k, k, |i, j| if i == j { c(svd.s[i], 0.0) } else { c(0.0, 0.0) });
        let back = svd.u.matmul(&d).matmul(&svd.vh);
        assert!(rel_err(back.as_slice(), a.as_slice()) < 1e-13);
    }

    #[test]
    fn single_precision_backend() {
        let a = CMatrix::<f32>::identity(3);
        let b = vec![Complex::new(1.0f32, 2.0); 3];
        let sol = f32::lu_solve(&a, &b).unwrap();
        assert_eq!(sol.x, b);
    }
}
