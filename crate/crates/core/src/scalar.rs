//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written against [`Real`], which is implemented for `f32`
//! and `f64`. FFTs and dense factorizations are routed through the trait so
//! that generic code does not need to carry `rustfft::FftNum` or
//! `nalgebra::RealField` bounds (both would make `abs`, `sqrt` and friends
//! ambiguous next to `Float`).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::{FftDirection, FftNum, FftPlanner};

use crate::linalg::{backend, CMatrix, LuSolution, Svd};

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Number of bytes of one real component, used by the array file format.
    const BYTES: usize;

    /// In-place unnormalized FFT of every contiguous row of length `len`.
    /// `inverse` selects the `e^{+2πi jk/n}` kernel.
    fn fft_rows(data: &mut [Complex<Self>], len: usize, inverse: bool);

    /// Lossless for `f64`, rounding for `f32`.
    fn from_f64_lossy(x: f64) -> Self;

    /// Solves `a x = b` by LU with partial pivoting. `None` if a pivot is exactly zero.
    fn lu_solve(a: &CMatrix<Self>, b: &[Complex<Self>]) -> Option<LuSolution<Self>>;

    /// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and
    /// the matching orthonormal eigenvectors as columns.
    fn hermitian_eigen(a: &CMatrix<Self>) -> (Vec<Self>, CMatrix<Self>);

    /// Thin singular value decomposition, singular values descending.
    fn svd(a: &CMatrix<Self>) -> Svd<Self>;
}

fn fft_rows_impl<T: FftNum>(data: &mut [Complex<T>], len: usize, inverse: bool) {
    if len <= 1 || data.is_empty() {
        return;
    }
    let direction = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let fft = FftPlanner::new().plan_fft(len, direction);
    fft.process(data);
}

impl Real for f64 {
    const BYTES: usize = 8;
    fn fft_rows(data: &mut [Complex<Self>], len: usize, inverse: bool) {
        fft_rows_impl(data, len, inverse)
    }
    fn lu_solve(a: &CMatrix<Self>, b: &[Complex<Self>]) -> Option<LuSolution<Self>> {
        backend::lu_solve(a, b)
    }
    fn hermitian_eigen(a: &CMatrix<Self>) -> (Vec<Self>, CMatrix<Self>) {
        backend::hermitian_eigen(a)
    }
    fn svd(a: &CMatrix<Self>) -> Svd<Self> {
        backend::svd(a)
    }
    fn from_f64_lossy(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    const BYTES: usize = 4;
    fn fft_rows(data: &mut [Complex<Self>], len: usize, inverse: bool) {
        fft_rows_impl(data, len, inverse)
    }
    fn lu_solve(a: &CMatrix<Self>, b: &[Complex<Self>]) -> Option<LuSolution<Self>> {
        backend::lu_solve(a, b)
    }
    fn hermitian_eigen(a: &CMatrix<Self>) -> (Vec<Self>, CMatrix<Self>) {
        backend::hermitian_eigen(a)
    }
    fn svd(a: &CMatrix<Self>) -> Svd<Self> {
        backend::svd(a)
    }
    fn from_f64_lossy(x: f64) -> Self {
        x as f32
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64_lossy(x)
}

/// Purely real complex number.
#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Imaginary unit.
#[inline]
pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{iφ}`.
#[inline]
pub fn cis<T: Real>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}
