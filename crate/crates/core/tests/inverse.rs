mod common;

use common::*;
use num_complex::Complex;
use psoct::forward::EquivalentSphere;
use psoct::inverse::{reconstruct, solve_psi33, Admissibility, InversionConfig, Regularization, SolveMode};
use psoct::linalg::{norm2, CMatrix};
use psoct::Error;

/// Discretized Gaussian blur: a smoothing first-kind operator with decaying
/// singular values.
fn blur(n: usize) -> CMatrix<f64> {
    CMatrix::from_fn(n, n, |i, j| {
        let d = (i as f64 - j as f64) / n as f64;
        Complex::new((-d * d / 0.005).exp() / n as f64, 0.0)
    })
}

fn smooth(n: usize) -> Vec<Complex<f64>> {
    (0..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            Complex::new((std::f64::consts::PI * x).sin(), 0.3 * (2.0 * std::f64::consts::PI * x).sin())
        })
        .collect()
}

fn noisy(b: &[Complex<f64>], level: f64, seed: u64) -> (Vec<Complex<f64>>, f64) {
    let mut u = Uniform::new(seed);
    let scale = level * norm2(b) / (b.len() as f64).sqrt();
    let e: Vec<Complex<f64>> = b.iter().map(|_| u.complex() * scale).collect();
    let out = b.iter().zip(&e).map(|(x, y)| x + y).collect();
    (out, norm2(&e))
}

#[test]
fn discrepancy_residual_matches_noise() {
    let a = blur(60);
    let x = smooth(60);
    let (b, delta) = noisy(&a.matvec(&x), 0.01, 1);
    let t = solve_psi33(&a, &b, &Regularization::Discrepancy { noise_norm: delta, tau: 1.0 }).unwrap();
    assert!((t.residual_norm - delta).abs() <= 1e-6 * delta, "{} vs {delta}", t.residual_norm);
    let r = norm2(&a.matvec(&t.y).iter().zip(&b).map(|(p, q)| p - q).collect::<Vec<_>>());
    assert!((r - t.residual_norm).abs() <= 1e-8 * delta);
}

#[test]
fn error_grows_with_noise() {
    let a = blur(60);
    let x = smooth(60);
    let clean = a.matvec(&x);
    let err = |level: f64| {
        let (b, delta) = noisy(&clean, level, 2);
        let t = solve_psi33(&a, &b, &Regularization::Discrepancy { noise_norm: delta, tau: 1.0 }).unwrap();
        rel_l2(&t.y, &x)
    };
    let (e1, e2, e3) = (err(1e-4), err(1e-2), err(1e-1));
    assert!(e1 < e2 && e2 < e3, "{e1} {e2} {e3}");
    assert!(e2 < 0.3);
}

#[test]
fn small_fixed_lambda_recovers_clean_data() {
    let a = CMatrix::from_fn(20, 20, |i, j| Complex::new(if i == j { 1.0 } else { 0.01 / (1.0 + (i + j) as f64) }, 0.0));
    let x = smooth(20);
    let t = solve_psi33(&a, &a.matvec(&x), &Regularization::Fixed { lambda: 1e-14 }).unwrap();
    assert!(rel_l2(&t.y, &x) < 1e-10);
}

#[test]
fn invalid_regularization_is_rejected() {
    let a = blur(10);
    let b = smooth(10);
    assert!(matches!(solve_psi33(&a, &b, &Regularization::Fixed { lambda: 0.0 }), Err(Error::Regularization(_))));
    assert!(matches!(
        solve_psi33(&a, &b, &Regularization::Discrepancy { noise_norm: -1.0, tau: 1.0 }),
        Err(Error::Regularization(_))
    ));
}

#[test]
fn excessive_exclusion_aborts() {
    let spec = desk_phantom(0.0);
    let samples = desk_samples(&spec, 4);
    let grid = psoct::Grid::from_spec(&spec.grid).unwrap();
    let cfg = InversionConfig {
        admissibility: Admissibility { tie: 1e-3, pole: 0.9 },
        max_excluded_fraction: 0.1,
        ..InversionConfig::default()
    };
    let r = reconstruct(grid, 0.0, &samples, &EquivalentSphere, &cfg);
    assert!(matches!(r, Err(Error::Sampling { .. })));
}

#[test]
fn zero_background_uses_pointwise_solves() {
    let spec = desk_phantom(0.0);
    let samples = desk_samples(&spec, 5);
    let grid = psoct::Grid::from_spec(&spec.grid).unwrap();
    let rec = reconstruct(grid, 0.0, &samples, &EquivalentSphere, &InversionConfig::default()).unwrap();
    assert!(rec.blocks.iter().all(|b| b.closed_form));
    assert!(!rec.psi33_solved);
}

#[test]
fn stacked_and_per_frequency_solves_agree() {
    let spec = desk_phantom(0.05);
    let samples = desk_samples(&spec, 8);
    let grid = psoct::Grid::from_spec(&spec.grid).unwrap();
    let err = |mode| {
        let cfg = InversionConfig { mode, psi33: false, ..InversionConfig::default() };
        let rec = reconstruct(grid, 0.05, &samples, &EquivalentSphere, &cfg).unwrap();
        let exact: Vec<_> = rec.points.iter().map(|p| spec.analytic_transform(&p.v)).collect();
        let got: Vec<Complex<f64>> = rec.psi.iter().flat_map(|p| [p[0], p[1], p[2]]).collect();
        let want: Vec<Complex<f64>> = exact.iter().flat_map(|p| [p[0], p[1], p[2]]).collect();
        rel_l2(&got, &want)
    };
    let stacked = err(SolveMode::Stacked);
    let split = err(SolveMode::PerFrequency);
    eprintln!("stacked {stacked:.3e}, per frequency {split:.3e}");
    assert!(stacked < 0.1 && split < 0.1);
}
