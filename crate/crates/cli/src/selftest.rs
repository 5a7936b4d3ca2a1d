//! Identity checks runnable on any build.

use num_complex::Complex;
use psoct::inverse::{i_tilde, m_tilde_direct, polarization_span_check, projected_response, rhs_from_m};
use psoct::jones::{qwp_matrix, PolarizationSetup, REFERENCE_PLATE_ANGLE, SAMPLE_PLATE_ANGLE};
use psoct::math::direction::{double_cross, Direction};
use psoct::math::fourier::{fft3, ft1d, ift1d};
use psoct::math::vec3::{det, to_complex, CMat3, CVec3};
use psoct::inverse::project;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// Knobs that deliberately break a check, to show the suite can fail.
#[derive(Clone, Copy, Debug, Default)]
pub struct Mutation {
    /// Added to the unit constant of the determinant closed form.
    pub determinant: f64,
}

const SEED: u64 = 0x5e1f_7e57;
const SAMPLES: usize = 1000;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn sym(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * uniform(rng) - 1.0
}

/// Uniform direction with `ϑ₃ ∈ [0.05, 1]`.
fn direction(rng: &mut ChaCha8Rng) -> Direction<f64> {
    let z = 0.05 + 0.95 * uniform(rng);
    let phi = std::f64::consts::TAU * uniform(rng);
    let r = (1.0 - z * z).sqrt();
    Direction::normalized([r * phi.cos(), r * phi.sin(), z]).expect("non-zero")
}

fn cvec(rng: &mut ChaCha8Rng) -> CVec3<f64> {
    [0; 3].map(|_| Complex::new(sym(rng), sym(rng)))
}

fn cmat(rng: &mut ChaCha8Rng) -> CMat3<f64> {
    [0; 3].map(|_| cvec(rng))
}

fn max_dev(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn jones() -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e1 = to_complex(&[1.0, 0.0, 0.0]);
    let e2 = to_complex(&[0.0, 1.0, 0.0]);
    let q = qwp_matrix(SAMPLE_PLATE_ANGLE);
    let r = qwp_matrix(REFERENCE_PLATE_ANGLE);
    let rr = r.compose(&r);
    let c = Complex::new;
    let cases = [
        (q.apply(&e1), [c(0.5, -0.5), c(0.5, 0.5), c(0.0, 0.0)]),
        (q.apply(&e2), [c(0.5, 0.5), c(0.5, -0.5), c(0.0, 0.0)]),
        (rr.apply(&e1), [c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]),
        (rr.apply(&e2), [c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]),
    ];
    cases.iter().map(|(got, want)| max_dev(got, want)).fold(0.0, f64::max)
}

fn determinant(rng: &mut ChaCha8Rng, m: &Mutation) -> f64 {
    let k = 1.0 + m.determinant;
    (0..SAMPLES)
        .map(|_| {
            let th = direction(rng);
            let t = th.theta();
            let want = k * (t[1] - t[0]) * (t[0] * t[0] + t[1] * t[1] - 1.0);
            (det(&i_tilde(&th)) - want).norm()
        })
        .fold(0.0, f64::max)
}

fn projection(rng: &mut ChaCha8Rng) -> f64 {
    (0..SAMPLES)
        .map(|_| {
            let th = direction(rng);
            let u = cvec(rng);
            let p = project(&th, &u);
            let neg: Vec<Complex<f64>> = p.iter().map(|z| -z).collect();
            max_dev(&double_cross(&th, &u), &neg)
        })
        .fold(0.0, f64::max)
}

/// `b = −√2 m̃` equals `P_ϑYp` for setup 1 and for the first component of
/// setup 2, and its negative for the second component of setup 2.
fn sign_pattern(rng: &mut ChaCha8Rng) -> f64 {
    let s = [PolarizationSetup::standard(1), PolarizationSetup::standard(2)];
    (0..SAMPLES)
        .map(|_| {
            let th = direction(rng);
            let y = cmat(rng);
            let m = [m_tilde_direct(&s[0], &th, &y), m_tilde_direct(&s[1], &th, &y)];
            let b = rhs_from_m(&m);
            let r1 = projected_response(&th, &y, &s[0].p);
            let r2 = projected_response(&th, &y, &s[1].p);
            max_dev(&[b[0], b[1], b[2], -b[3]], &[r1[0], r1[1], r2[0], r2[1]])
        })
        .fold(0.0, f64::max)
}

fn span(rng: &mut ChaCha8Rng) -> f64 {
    (0..100)
        .map(|_| {
            let (c1, c2) = (sym(rng), sym(rng));
            let th = direction(rng);
            polarization_span_check(c1, c2, &th, &cmat(rng)).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

fn fourier(rng: &mut ChaCha8Rng) -> f64 {
    let dims = [6, 5, 4];
    let x: Vec<Complex<f64>> = (0..120).map(|_| Complex::new(sym(rng), sym(rng))).collect();
    let mut y = x.clone();
    fft3(&mut y, dims, false);
    fft3(&mut y, dims, true);
    let y: Vec<Complex<f64>> = y.iter().map(|z| z / 120.0).collect();
    let e3 = max_dev(&x, &y);
    let f: Vec<f64> = (0..64).map(|_| sym(rng)).collect();
    let e1 = match ft1d(&f, -0.3, 0.01).and_then(|s| ift1d(&s)) {
        Ok(back) => f.iter().zip(&back).map(|(a, b)| (a - b.re).abs().max(b.im.abs())).fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    e3.max(e1)
}

pub fn run(m: &Mutation) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    vec![
        Check {
            name: "quarter-wave plate vectors",
            error: jones(),
            tolerance: 1e-14,
        },
        Check {
            name: "reduced-matrix determinant",
            error: determinant(&mut rng, m),
            tolerance: 1e-13,
        },
        Check {
            name: "double cross is minus projection",
            error: projection(&mut rng),
            tolerance: 1e-13,
        },
        Check {
            name: "right-hand-side sign pattern",
            error: sign_pattern(&mut rng),
            tolerance: 1e-13,
        },
        Check {
            name: "polarization span",
            error: span(&mut rng),
            tolerance: 1e-10,
        },
        Check {
            name: "Fourier round trips",
            error: fourier(&mut rng),
            tolerance: 1e-12,
        },
    ]
}

pub fn print_table(checks: &[Check]) {
    println!("{:<36} {:>12} {:>12}  result", "check", "max error", "tolerance");
    for c in checks {
        println!(
            "{:<36} {:>12.3e} {:>12.1e}  {}",
            c.name,
            c.error,
            c.tolerance,
            if c.passed() { "pass" } else { "FAIL" }
        );
    }
}
