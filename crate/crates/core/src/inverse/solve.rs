//! Dense solvers for the reduced equations.

use log::debug;
use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::reduced::ReducedSystem;
use crate::linalg::{norm2, CMatrix};
use crate::math::vec3::{adjugate, det, mvec};
use crate::scalar::{lit, Real};

/// Default relative residual accepted from the direct solve.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SecondKindSolution<T> {
    /// `(ψ̃₁₁, ψ̃₁₂, ψ̃₂₂)` per sample.
    pub y: Vec<[Complex<T>; 3]>,
    /// `‖(𝟙 + 𝒞)ỹ − 𝓘̃⁻¹b̃‖ / ‖𝓘̃⁻¹b̃‖`.
    pub residual: T,
    pub pivot_ratio: T,
    /// True when `χ₀ = 0` and each sample was solved on its own.
    pub closed_form: bool,
}

fn i_tilde_inverse<T: Real>(m: &[[Complex<T>; 3]; 3]) -> Result<[[Complex<T>; 3]; 3]> {
    let d = det(m);
    if d.norm() == T::zero() {
        return Err(Error::Singularity);
    }
    let adj = adjugate(m);
    let mut out = adj;
    for row in out.iter_mut() {
        for e in row.iter_mut() {
            *e = *e / d;
        }
    }
    Ok(out)
}

/// `𝟙 + 𝓘̃⁻¹𝓝` and `𝓘̃⁻¹b̃`.
pub fn second_kind_operator<T: Real>(sys: &ReducedSystem<T>) -> Result<(CMatrix<T>, Vec<Complex<T>>)> {
    let n = sys.len();
    let mut op = sys.matrix.clone();
    let mut rhs = sys.rhs.clone();
    for a in 0..n {
        let inv = i_tilde_inverse(&sys.i_tilde[a])?;
        let rows: Vec<Vec<Complex<T>>> = (0..3).map(|i| op.row(3 * a + i).to_vec()).collect();
        for i in 0..3 {
            let out = op.row_mut(3 * a + i);
            for (c, o) in out.iter_mut().enumerate() {
                *o = inv[i][0] * rows[0][c] + inv[i][1] * rows[1][c] + inv[i][2] * rows[2][c];
            }
        }
        let b = [rhs[3 * a], rhs[3 * a + 1], rhs[3 * a + 2]];
        let ib = mvec(&inv, &b);
        rhs[3 * a..3 * a + 3].copy_from_slice(&ib);
    }
    Ok((op, rhs))
}

/// Solves `(𝟙 + 𝓘̃⁻¹𝓝) ỹ = 𝓘̃⁻¹b̃` by LU, or per sample when `χ₀ = 0`.
pub fn solve_second_kind<T: Real>(sys: &ReducedSystem<T>, tol: T) -> Result<SecondKindSolution<T>> {
    let n = sys.len();
    if n == 0 {
        return Err(Error::EmptyInput("no samples in the reduced system"));
    }
    if sys.chi0 == T::zero() {
        let mut y = Vec::with_capacity(n);
        for a in 0..n {
            let inv = i_tilde_inverse(&sys.i_tilde[a])?;
            let b = [sys.rhs[3 * a], sys.rhs[3 * a + 1], sys.rhs[3 * a + 2]];
            y.push(mvec(&inv, &b));
        }
        return Ok(SecondKindSolution {
            y,
            residual: T::zero(),
            pivot_ratio: T::one(),
            closed_form: true,
        });
    }
    let (op, rhs) = second_kind_operator(sys)?;
    let lu = T::lu_solve(&op, &rhs).ok_or(Error::SingularMatrix {
        column: 0,
        pivot: 0.0,
    })?;
    let ax = op.matvec(&lu.x);
    let r: Vec<Complex<T>> = ax.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let bn = norm2(&rhs);
    let residual = if bn > T::zero() { norm2(&r) / bn } else { norm2(&r) };
    debug!("second-kind solve: residual {residual:e}, pivot ratio {:e}", lu.pivot_ratio);
    if !(residual <= tol) {
        return Err(Error::Residual {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let y = (0..n).map(|a| [lu.x[3 * a], lu.x[3 * a + 1], lu.x[3 * a + 2]]).collect();
    Ok(SecondKindSolution {
        y,
        residual,
        pivot_ratio: lu.pivot_ratio,
        closed_form: false,
    })
}

/// Choice of the Tikhonov parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularization {
    /// `λ = 1e-4 ‖𝓜₃‖²` (spectral norm).
    Default,
    Fixed { lambda: f64 },
    /// `λ` with `‖𝓜₃y − b‖ = τ δ`, where `δ` is the noise norm.
    Discrepancy { noise_norm: f64, tau: f64 },
}

impl Default for Regularization {
    fn default() -> Self {
        Regularization::Default
    }
}

#[derive(Clone, Debug)]
pub struct TikhonovSolution<T> {
    pub y: Vec<Complex<T>>,
    pub lambda: T,
    pub residual_norm: T,
    pub operator_norm: T,
}

/// SVD-filtered Tikhonov solution of `min ‖A y − b‖² + λ‖y‖²`.
pub struct Tikhonov<T> {
    u: CMatrix<T>,
    s: Vec<T>,
    vh: CMatrix<T>,
}

impl<T: Real> Tikhonov<T> {
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::EmptyInput("empty first-kind operator"));
        }
        let svd = T::svd(a);
        if !(svd.s[0] > T::zero()) {
            return Err(Error::Regularization(0.0));
        }
        Ok(Self {
            u: svd.u,
            s: svd.s,
            vh: svd.vh,
        })
    }

    pub fn norm(&self) -> T {
        self.s[0]
    }

    fn beta(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        self.u.adjoint_matvec(b)
    }

    fn filtered(&self, beta: &[Complex<T>], lambda: T) -> Vec<Complex<T>> {
        let coef: Vec<Complex<T>> = self
            .s
            .iter()
            .zip(beta)
            .map(|(&s, &b)| b * (s / (s * s + lambda)))
            .collect();
        self.vh.adjoint_matvec(&coef)
    }

    /// `‖A y_λ − b‖` without forming `y_λ`.
    fn residual(&self, beta: &[Complex<T>], b: &[Complex<T>], lambda: T) -> T {
        let out = b.iter().map(|z| z.norm_sqr()).sum::<T>() - beta.iter().map(|z| z.norm_sqr()).sum::<T>();
        let inside: T = self
            .s
            .iter()
            .zip(beta)
            .map(|(&s, z)| {
                let f = lambda / (s * s + lambda);
                f * f * z.norm_sqr()
            })
            .sum();
        (inside + out.max(T::zero())).sqrt()
    }

    pub fn solve(&self, b: &[Complex<T>], reg: &Regularization) -> Result<TikhonovSolution<T>> {
        if b.len() != self.u.rows() {
            return Err(Error::Shape(format!("right-hand side has {} rows, operator {}", b.len(), self.u.rows())));
        }
        let beta = self.beta(b);
        let smax2 = self.s[0] * self.s[0];
        let lambda = match *reg {
            Regularization::Default => lit::<T>(1e-4) * smax2,
            Regularization::Fixed { lambda } => {
                if !(lambda > 0.0) {
                    return Err(Error::Regularization(lambda));
                }
                lit(lambda)
            }
            Regularization::Discrepancy { noise_norm, tau } => {
                if !(noise_norm > 0.0) || !(tau > 0.0) {
                    return Err(Error::Regularization(noise_norm * tau));
                }
                let target = lit::<T>(noise_norm * tau);
                let mut lo = lit::<T>(1e-30) * smax2;
                let mut hi = lit::<T>(1e10) * smax2;
                if self.residual(&beta, b, lo) > target {
                    return Err(Error::Regularization(noise_norm * tau));
                }
                if self.residual(&beta, b, hi) <= target {
                    hi.max(lo)
                } else {
                    for _ in 0..200 {
                        let mid = (lo * hi).sqrt();
                        if self.residual(&beta, b, mid) > target {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                        if hi / lo < T::one() + lit(1e-10) {
                            break;
                        }
                    }
                    lo
                }
            }
        };
        let y = if beta.iter().all(|z| z.is_zero()) {
            vec![Complex::zero(); self.vh.cols()]
        } else {
            self.filtered(&beta, lambda)
        };
        Ok(TikhonovSolution {
            residual_norm: self.residual(&beta, b, lambda),
            y,
            lambda,
            operator_norm: self.s[0],
        })
    }
}

/// Regularized first-kind solve `𝓜₃ y₄ = b`.
pub fn solve_psi33<T: Real>(m3: &CMatrix<T>, b: &[Complex<T>], reg: &Regularization) -> Result<TikhonovSolution<T>> {
    Tikhonov::new(m3)?.solve(b, reg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn well_conditioned(n: usize) -> CMatrix<f64> {
        CMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 2.0 } else { 0.0 };
            Complex::new(d + 0.1 / (1.0 + (i + j) as f64), 0.05 * (i as f64 - j as f64).sin())
        })
    }

    #[test]
    fn tikhonov_recovers_with_small_lambda() {
        let a = well_conditioned(12);
        let y: Vec<Complex<f64>> = (0..12).map(|i| Complex::new((i as f64).cos(), 0.3)).collect();
        let b = a.matvec(&y);
        let s = solve_psi33(&a, &b, &Regularization::Fixed { lambda: 1e-14 }).unwrap();
        assert!(crate::linalg::rel_err(&s.y, &y) < 1e-6);
    }

    #[test]
    fn zero_data_gives_zero() {
        let a = well_conditioned(5);
        let s = solve_psi33(&a, &[Complex::zero(); 5], &Regularization::Fixed { lambda: 0.3 }).unwrap();
        assert!(s.y.iter().all(|z| z.is_zero()));
        assert!(matches!(
            solve_psi33(&a, &[Complex::zero(); 5], &Regularization::Fixed { lambda: 0.0 }),
            Err(Error::Regularization(_))
        ));
        assert!(Tikhonov::new(&CMatrix::<f64>::zeros(3, 3)).is_err());
    }

    #[test]
    fn discrepancy_hits_target() {
        let a = well_conditioned(10);
        let y: Vec<Complex<f64>> = (0..10).map(|i| Complex::new(1.0, i as f64)).collect();
        let mut b = a.matvec(&y);
        b[3] += Complex::new(0.05, 0.0);
        let s = solve_psi33(&a, &b, &Regularization::Discrepancy { noise_norm: 0.05, tau: 1.0 }).unwrap();
        assert!((s.residual_norm - 0.05).abs() < 1e-6);
    }
}
