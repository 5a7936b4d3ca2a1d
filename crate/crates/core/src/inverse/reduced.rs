//! Reduced 3×3-per-sample system for `(ψ̃₁₁, ψ̃₁₂, ψ̃₂₂)` and the first-kind
//! equation for `ψ̃₃₃`.
//!
//! With `y = (ψ̃₁₁, ψ̃₁₂, ψ̃₂₂, ψ̃₃₃)`, the first two components of `P_ϑ Y p`
//! are `(𝓘(p) + χ₀𝓛(p) + χ₀(p₁+p₂)𝓜) y`, where
//! `𝓛_kj = (1 − ϑ_k² − ϑ₁ϑ₂)(𝒦₁ⱼ + 𝒦₂ⱼ) − ϑ_kϑ₃𝒦₃ⱼ` and `𝓜ⱼ = 𝒦†ⱼ₁ + 𝒦†ⱼ₂`.
//! Subtracting the two setups and forming `ϑ₂·row₁ − ϑ₁·row₂` of setup 1
//! removes `ψ̃₃₃` and gives `(𝓘̃ + 𝓝) ỹ = b̃`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inverse::kernel::KernelTable;
use crate::inverse::sampling::SamplePoint;
use crate::jones::PolarizationSetup;
use crate::linalg::CMatrix;
use crate::math::direction::Direction;
use crate::math::vec3::{mvec, CMat3, CVec3};
use crate::measurement::KSpaceSample;
use crate::scalar::{imag_unit, lit, re, Real};

/// `P_ϑ u = u − ϑ⟨ϑ,u⟩`.
pub fn project<T: Real>(theta: &Direction<T>, u: &CVec3<T>) -> CVec3<T> {
    let t = theta.theta();
    let d = u[0] * t[0] + u[1] * t[1] + u[2] * t[2];
    [u[0] - d * t[0], u[1] - d * t[1], u[2] - d * t[2]]
}

/// First two components of `P_ϑ Y p`, computed directly.
pub fn projected_response<T: Real>(theta: &Direction<T>, y: &CMat3<T>, p: &CVec3<T>) -> [Complex<T>; 2] {
    let v = project(theta, &mvec(y, p));
    [v[0], v[1]]
}

/// `b = −√2 m̃` in the setup-major order `(b¹₁, b¹₂, b²₁, b²₂)`.
pub fn rhs_from_m<T: Real>(m: &[[Complex<T>; 2]; 2]) -> [Complex<T>; 4] {
    let s = -lit::<T>(2.0).sqrt();
    [m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s]
}

/// `b̃ = (b¹₁ − b²₁, b¹₂ + b²₂, ϑ₂b¹₁ − ϑ₁b¹₂)`.
pub fn b_tilde<T: Real>(theta: &Direction<T>, b: &[Complex<T>; 4]) -> [Complex<T>; 3] {
    let t = theta.theta();
    [b[0] - b[2], b[1] + b[3], b[0] * t[1] - b[1] * t[0]]
}

/// `𝓘(p)`: rows 1 and 2, columns `ψ̃₁₁, ψ̃₁₂, ψ̃₂₂, ψ̃₃₃`.
pub fn i_matrix<T: Real>(theta: &Direction<T>, p: &CVec3<T>) -> [[Complex<T>; 4]; 2] {
    let t = theta.theta();
    let (t1, t2) = (t[0], t[1]);
    let one = T::one();
    let z = Complex::zero();
    [
        [
            p[0] * (one - t1 * t1),
            -p[0] * t1 * t2 + p[1] * (one - t1 * t1),
            -p[1] * t1 * t2,
            z,
        ],
        [
            -p[0] * t1 * t2,
            -p[1] * t1 * t2 + p[0] * (one - t2 * t2),
            p[1] * (one - t2 * t2),
            z,
        ],
    ]
}

/// `𝓛_kj` for `k, j ∈ {1, 2}` from one `𝒦` block.
pub fn l_entries<T: Real>(theta: &Direction<T>, qz: &CMat3<T>) -> [[Complex<T>; 2]; 2] {
    let t = theta.theta();
    let mut out = [[Complex::zero(); 2]; 2];
    for k in 0..2 {
        let a = T::one() - t[k] * t[k] - t[0] * t[1];
        for j in 0..2 {
            out[k][j] = (qz[0][j] + qz[1][j]) * a - qz[2][j] * (t[k] * t[2]);
        }
    }
    out
}

/// `𝓜ⱼ = 𝒦†ⱼ₁ + 𝒦†ⱼ₂`, `j = 1, 2, 3`, from one `𝒦†` block.
pub fn m_entries<T: Real>(qy: &CMat3<T>) -> [Complex<T>; 3] {
    [qy[0][0] + qy[0][1], qy[1][0] + qy[1][1], qy[2][0] + qy[2][1]]
}

/// `𝓛(p)`: rows 1 and 2.
pub fn l_matrix<T: Real>(l: &[[Complex<T>; 2]; 2], p: &CVec3<T>) -> [[Complex<T>; 4]; 2] {
    let z = Complex::zero();
    let row = |k: usize| [p[0] * l[k][0], p[0] * l[k][1] + p[1] * l[k][0], p[1] * l[k][1], z];
    [row(0), row(1)]
}

/// `𝓜`: rows 1 and 2, including the `ψ̃₃₃` column.
pub fn m_matrix<T: Real>(theta: &Direction<T>, m: &[Complex<T>; 3]) -> [[Complex<T>; 4]; 2] {
    let t = theta.theta();
    let one = T::one();
    [
        [
            m[0] * (one - t[0] * t[0]),
            -m[0] * t[0] * t[1] + m[1] * (one - t[0] * t[0]),
            -m[1] * t[0] * t[1],
            -m[2] * t[0] * t[2],
        ],
        [
            -m[0] * t[0] * t[1],
            m[0] * (one - t[1] * t[1]) - m[1] * t[0] * t[1],
            m[1] * (one - t[1] * t[1]),
            -m[2] * t[1] * t[2],
        ],
    ]
}

/// Block `(a, b)` of the operator `𝓘(p)δ_ab + χ₀𝓛(p) + χ₀(p₁+p₂)𝓜` acting on `y_b`.
pub fn p_block<T: Real>(
    theta: &Direction<T>,
    p: &CVec3<T>,
    qz: &CMat3<T>,
    qy: &CMat3<T>,
    chi0: T,
    diagonal: bool,
) -> [[Complex<T>; 4]; 2] {
    let l = l_matrix(&l_entries(theta, qz), p);
    let m = m_matrix(theta, &m_entries(qy));
    let mut out = if diagonal {
        i_matrix(theta, p)
    } else {
        [[Complex::zero(); 4]; 2]
    };
    let c = re(chi0);
    let pm = (p[0] + p[1]) * c;
    for r in 0..2 {
        for col in 0..4 {
            out[r][col] += l[r][col] * c + m[r][col] * pm;
        }
    }
    out
}

/// `𝓘̃` for the standard setups.
pub fn i_tilde<T: Real>(theta: &Direction<T>) -> CMat3<T> {
    let t = theta.theta();
    let (t1, t2) = (t[0], t[1]);
    let one = T::one();
    let two = lit::<T>(2.0);
    let i = imag_unit::<T>();
    let half_i = i * lit::<T>(0.5);
    let c = |x: T| re(x);
    let m = [
        [
            c(two * (t1 * t1 - one)),
            c(two * (one + t1 * t2 - t1 * t1)),
            c(-two * t1 * t2),
        ],
        [
            c(two * t1 * t2),
            c(two * (t2 * t2 - t1 * t2 - one)),
            c(two * (one - t2 * t2)),
        ],
        [
            (re(one) + i) * (-t2),
            (i + one) * t1 + (re(one) - i) * t2,
            (re(one) - i) * (-t1),
        ],
    ];
    let mut out = m;
    for row in out.iter_mut() {
        for e in row.iter_mut() {
            *e *= half_i;
        }
    }
    out
}

/// Closed form of `det 𝓘̃ = (ϑ₂ − ϑ₁)(ϑ₁² + ϑ₂² − 1)`.
pub fn i_tilde_det<T: Real>(theta: &Direction<T>) -> Complex<T> {
    let t = theta.theta();
    re((t[1] - t[0]) * (t[0] * t[0] + t[1] * t[1] - T::one()))
}

/// Block `(a, b)` of `𝓝` for the standard setups.
pub fn n_block<T: Real>(theta: &Direction<T>, qz: &CMat3<T>, qy: &CMat3<T>, chi0: T) -> CMat3<T> {
    let t = theta.theta();
    let (t1, t2) = (t[0], t[1]);
    let l = l_entries(theta, qz);
    let m = m_entries(qy);
    let i = imag_unit::<T>();
    let ic = i * chi0;
    let half = lit::<T>(0.5);
    let p1 = (re(T::one()) - i) * half;
    let p2 = (re(T::one()) + i) * half;
    // ϑ₂ 𝓛₁ⱼ − ϑ₁ 𝓛₂ⱼ
    let d = [l[0][0] * t2 - l[1][0] * t1, l[0][1] * t2 - l[1][1] * t1];
    let c = re(chi0);
    [
        [-l[0][0] * ic, (l[0][0] - l[0][1]) * ic, l[0][1] * ic],
        [-l[1][0] * ic, (l[1][0] - l[1][1]) * ic, l[1][1] * ic],
        [
            (p1 * d[0] + m[0] * t2) * c,
            (p1 * d[1] + p2 * d[0] + m[1] * t2 - m[0] * t1) * c,
            (p2 * d[1] - m[1] * t1) * c,
        ],
    ]
}

/// Standard incident polarizations `p⁽¹⁾, p⁽²⁾`.
pub fn standard_polarizations<T: Real>() -> [CVec3<T>; 2] {
    [PolarizationSetup::<T>::standard(1).p, PolarizationSetup::<T>::standard(2).p]
}

/// Assembled `(𝓘̃ + 𝓝) ỹ = b̃` over a sample set, unknowns sample-major.
#[derive(Clone, Debug)]
pub struct ReducedSystem<T> {
    pub points: Vec<SamplePoint<T>>,
    pub chi0: T,
    /// `𝓘̃ + 𝓝`, `3n × 3n`.
    pub matrix: CMatrix<T>,
    /// `𝓘̃` per sample.
    pub i_tilde: Vec<CMat3<T>>,
    /// `b̃`, `3n`.
    pub rhs: Vec<Complex<T>>,
    /// `(b¹₁, b¹₂, b²₁, b²₂)` per sample.
    pub b: Vec<[Complex<T>; 4]>,
}

impl<T: Real> ReducedSystem<T> {
    /// `b` holds `(b¹₁, b¹₂, b²₁, b²₂)` per sample.
    pub fn assemble(points: &[SamplePoint<T>], table: &KernelTable<T>, chi0: T, b: Vec<[Complex<T>; 4]>) -> Result<Self> {
        let n = points.len();
        if table.len() != n || b.len() != n {
            return Err(Error::Shape(format!(
                "{} samples, {} kernel rows, {} data rows",
                n,
                table.len(),
                b.len()
            )));
        }
        let mut rows: Vec<Vec<Complex<T>>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let th = &points[a].theta;
                let it = i_tilde(th);
                let mut r = vec![Complex::zero(); 3 * 3 * n];
                for bb in 0..n {
                    let nb = if chi0 == T::zero() {
                        [[Complex::zero(); 3]; 3]
                    } else {
                        n_block(th, table.qz(a, bb), table.qy(a, bb), chi0)
                    };
                    for i in 0..3 {
                        for j in 0..3 {
                            let mut v = nb[i][j];
                            if a == bb {
                                v += it[i][j];
                            }
                            r[i * 3 * n + 3 * bb + j] = v;
                        }
                    }
                }
                r
            })
            .collect();
        let mut data = Vec::with_capacity(9 * n * n);
        for r in rows.iter_mut() {
            data.append(r);
        }
        let matrix = CMatrix::from_vec(3 * n, 3 * n, data);
        let i_tilde_blocks = points.iter().map(|p| i_tilde(&p.theta)).collect();
        let rhs = points
            .iter()
            .zip(&b)
            .flat_map(|(p, bb)| b_tilde(&p.theta, bb))
            .collect();
        Ok(Self {
            points: points.to_vec(),
            chi0,
            matrix,
            i_tilde: i_tilde_blocks,
            rhs,
            b,
        })
    }

    /// System for measured samples (`b = −√2 m̃`).
    pub fn from_measurements(points: &[SamplePoint<T>], table: &KernelTable<T>, chi0: T, samples: &[&KSpaceSample<T>]) -> Result<Self> {
        let b = samples.iter().map(|s| rhs_from_m(&s.m)).collect();
        Self::assemble(points, table, chi0, b)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `[(𝓘(p) + χ₀𝓛(p) + χ₀(p₁+p₂)𝓜) y]_{1,2}` at every sample, for `y` with four components.
pub fn apply_p_rows<T: Real>(
    points: &[SamplePoint<T>],
    table: &KernelTable<T>,
    chi0: T,
    p: &CVec3<T>,
    y: &[[Complex<T>; 4]],
) -> Vec<[Complex<T>; 2]> {
    let n = points.len();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let th = &points[a].theta;
            let mut acc = [Complex::zero(); 2];
            for b in 0..n {
                let blk = p_block(th, p, table.qz(a, b), table.qy(a, b), chi0, a == b);
                for r in 0..2 {
                    for c in 0..4 {
                        acc[r] += blk[r][c] * y[b][c];
                    }
                }
            }
            acc
        })
        .collect()
}

/// `(𝓜₃)_ab`: the first-kind operator acting on `ψ̃₃₃`.
pub fn m3_matrix<T: Real>(table: &KernelTable<T>) -> CMatrix<T> {
    let n = table.len();
    CMatrix::from_fn(n, n, |a, b| m_entries(table.qy(a, b))[2])
}

/// Right-hand side of `𝓜₃ ψ̃₃₃ = r` from setup-1 rows once `ψ̃₁₁, ψ̃₁₂, ψ̃₂₂` are known:
/// the remainders `r_k = b¹_k − [… ỹ]_k = −χ₀ϑ_kϑ₃ 𝓜₃y₄` are combined by least squares.
pub fn psi33_rhs<T: Real>(
    points: &[SamplePoint<T>],
    table: &KernelTable<T>,
    chi0: T,
    y123: &[[Complex<T>; 3]],
    b: &[[Complex<T>; 4]],
) -> Result<Vec<Complex<T>>> {
    if chi0 == T::zero() {
        return Err(Error::InvalidArgument("ψ̃₃₃ is invisible when χ₀ = 0".into()));
    }
    let y: Vec<[Complex<T>; 4]> = y123.iter().map(|v| [v[0], v[1], v[2], Complex::zero()]).collect();
    let p = standard_polarizations::<T>()[0];
    let known = apply_p_rows(points, table, chi0, &p, &y);
    Ok(points
        .iter()
        .zip(known.iter().zip(b))
        .map(|(pt, (kn, bb))| {
            let t = pt.theta.theta();
            let r1 = bb[0] - kn[0];
            let r2 = bb[1] - kn[1];
            (r1 * t[0] + r2 * t[1]) / (-chi0 * t[2] * (t[0] * t[0] + t[1] * t[1]))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::vec3::det;

    #[test]
    fn determinant_at_reference_direction() {
        let th = Direction::new([0.6, 0.0, 0.8_f64]).unwrap();
        let d = det(&i_tilde(&th));
        assert!((d - Complex::new(0.384, 0.0)).norm() < 1e-15);
        assert!((i_tilde_det(&th) - d).norm() < 1e-15);
    }

    #[test]
    fn tie_makes_i_tilde_singular() {
        let th = Direction::normalized([0.4, 0.4, 0.8_f64]).unwrap();
        assert!(det(&i_tilde(&th)).norm() < 1e-15);
    }
}
