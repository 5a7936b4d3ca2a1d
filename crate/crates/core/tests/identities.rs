//! Property checks of the pointwise algebra on random inputs.

use num_complex::Complex;
use proptest::prelude::*;
use psoct::inverse::{
    i_tilde, i_tilde_det, m_tilde_direct, polarization_span_check, project, projected_response, rhs_from_m,
};
use psoct::jones::{qwp_matrix, PolarizationSetup};
use psoct::math::direction::{double_cross, Direction};
use psoct::math::vec3::{adjoint, det, mmul, transpose, CMat3, CVec3};

fn direction() -> impl Strategy<Value = Direction<f64>> {
    (0.02f64..1.0, 0.0..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        Direction::normalized([r * phi.cos(), r * phi.sin(), z]).unwrap()
    })
}

fn complex() -> impl Strategy<Value = Complex<f64>> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex::new(a, b))
}

fn cvec() -> impl Strategy<Value = CVec3<f64>> {
    [complex(), complex(), complex()]
}

fn cmat() -> impl Strategy<Value = CMat3<f64>> {
    [cvec(), cvec(), cvec()]
}

fn dev(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn wave_plates_are_unitary(phi in -3.2f64..3.2) {
        let q = qwp_matrix(phi);
        let m = [q.apply(&[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)]),
                 q.apply(&[Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]),
                 q.apply(&[Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)])];
        // columns of the plate matrix are orthonormal
        let g = mmul(&adjoint(&transpose(&m)), &transpose(&m));
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g[i][j] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn reduced_determinant_has_unit_constant(th in direction()) {
        let t = th.theta();
        let poly = (t[1] - t[0]) * (t[0] * t[0] + t[1] * t[1] - 1.0);
        prop_assert!((det(&i_tilde(&th)) - poly).norm() < 1e-13);
        prop_assert!((i_tilde_det(&th) - poly).norm() < 1e-13);
    }

    #[test]
    fn double_cross_is_minus_projection(th in direction(), u in cvec()) {
        let p: Vec<Complex<f64>> = project(&th, &u).iter().map(|z| -z).collect();
        prop_assert!(dev(&double_cross(&th, &u), &p) < 1e-13);
    }

    #[test]
    fn projection_is_idempotent_and_transverse(th in direction(), u in cvec()) {
        let p = project(&th, &u);
        prop_assert!(dev(&project(&th, &p), &p) < 1e-14);
        let t = th.theta();
        let along: Complex<f64> = (0..3).map(|i| p[i] * t[i]).sum();
        prop_assert!(along.norm() < 1e-14);
    }

    #[test]
    fn right_hand_side_sign_pattern(th in direction(), y in cmat()) {
        let s = [PolarizationSetup::standard(1), PolarizationSetup::standard(2)];
        let b = rhs_from_m(&[m_tilde_direct(&s[0], &th, &y), m_tilde_direct(&s[1], &th, &y)]);
        let r1 = projected_response(&th, &y, &s[0].p);
        let r2 = projected_response(&th, &y, &s[1].p);
        prop_assert!(dev(&[b[0], b[1], b[2], -b[3]], &[r1[0], r1[1], r2[0], r2[1]]) < 1e-13);
    }

    #[test]
    fn polarization_span(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, th in direction(), y in cmat()) {
        prop_assert!(polarization_span_check(c1, c2, &th, &y).unwrap() < 1e-10);
    }

    #[test]
    fn single_precision_determinant(th in direction()) {
        let t = th.theta();
        let th32 = Direction::normalized([t[0] as f32, t[1] as f32, t[2] as f32]).unwrap();
        let u = th32.theta();
        let poly = (u[1] - u[0]) * (u[0] * u[0] + u[1] * u[1] - 1.0);
        prop_assert!((det(&i_tilde(&th32)) - poly).norm() < 1e-5);
    }
}
