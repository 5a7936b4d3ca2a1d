//! Fixed-size 3-vector and 3×3 matrix helpers.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{re, Real};

pub type Vec3<T> = [T; 3];
pub type CVec3<T> = [Complex<T>; 3];
pub type CMat3<T> = [[Complex<T>; 3]; 3];

pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

pub fn sub<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale<T: Real>(a: &Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// `⟨a, u⟩` with real `a` (no conjugation).
pub fn rdot<T: Real>(a: &Vec3<T>, u: &CVec3<T>) -> Complex<T> {
    u[0] * a[0] + u[1] * a[1] + u[2] * a[2]
}

/// Real cross complex.
pub fn rcross<T: Real>(a: &Vec3<T>, u: &CVec3<T>) -> CVec3<T> {
    [
        u[2] * a[1] - u[1] * a[2],
        u[0] * a[2] - u[2] * a[0],
        u[1] * a[0] - u[0] * a[1],
    ]
}

pub fn czero<T: Real>() -> CVec3<T> {
    [Complex::zero(); 3]
}

pub fn cadd<T: Real>(a: &CVec3<T>, b: &CVec3<T>) -> CVec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn csub<T: Real>(a: &CVec3<T>, b: &CVec3<T>) -> CVec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cscale<T: Real>(a: &CVec3<T>, s: Complex<T>) -> CVec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn cnorm<T: Real>(a: &CVec3<T>) -> T {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

pub fn to_complex<T: Real>(a: &Vec3<T>) -> CVec3<T> {
    [re(a[0]), re(a[1]), re(a[2])]
}

pub fn mzero<T: Real>() -> CMat3<T> {
    [[Complex::zero(); 3]; 3]
}

pub fn midentity<T: Real>() -> CMat3<T> {
    let mut m = mzero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = re(T::one());
    }
    m
}

pub fn mvec<T: Real>(m: &CMat3<T>, v: &CVec3<T>) -> CVec3<T> {
    let mut out = czero();
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

pub fn mmul<T: Real>(a: &CMat3<T>, b: &CMat3<T>) -> CMat3<T> {
    let mut out = mzero();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn madd<T: Real>(a: &CMat3<T>, b: &CMat3<T>) -> CMat3<T> {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mscale<T: Real>(a: &CMat3<T>, s: Complex<T>) -> CMat3<T> {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    out
}

pub fn transpose<T: Real>(a: &CMat3<T>) -> CMat3<T> {
    let mut out = mzero();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn adjoint<T: Real>(a: &CMat3<T>) -> CMat3<T> {
    let mut out = transpose(a);
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = x.conj();
        }
    }
    out
}

pub fn det<T: Real>(m: &CMat3<T>) -> Complex<T> {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Adjugate (transposed cofactor matrix), so that `m · adj(m) = det(m) 𝟙`.
pub fn adjugate<T: Real>(m: &CMat3<T>) -> CMat3<T> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

pub fn mnorm<T: Real>(a: &CMat3<T>) -> T {
    a.iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm_sqr())
        .sum::<T>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_inverts() {
        let m: CMat3<f64> = [
            [Complex::new(1.0, 0.5), Complex::new(2.0, 0.0), Complex::new(0.0, -1.0)],
            [Complex::new(0.3, 0.0), Complex::new(-1.0, 1.0), Complex::new(2.0, 0.0)],
            [Complex::new(0.0, 2.0), Complex::new(1.0, 0.0), Complex::new(0.5, 0.5)],
        ];
        let p = mmul(&m, &adjugate(&m));
        let d = det(&m);
        for (i, row) in p.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { d } else { Complex::zero() };
                assert!((x - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn cross_matches_component_formula() {
        let a = [1.0, 2.0, 3.0];
        let u = to_complex(&[4.0, 5.0, 6.0]);
        let c = rcross(&a, &u);
        assert_eq!(c[0].re, -3.0);
        assert_eq!(c[1].re, 6.0);
        assert_eq!(c[2].re, -3.0);
    }
}
