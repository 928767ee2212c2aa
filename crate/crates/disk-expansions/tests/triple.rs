mod common;

use std::f64::consts::PI;

use common::{random_expansion, theta_average};
use disk_expansions::{angular_triple_reduce, monte_carlo_triple, CaseTag, DifferentialExpansion, DiskError};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Harmonics of the product are at most 2N + 9, so the 64-point trapezoid
// rule is exact for N = 16.
const ORDER: usize = 16;

#[test]
fn reduction_matches_quadrature_for_every_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for case in CaseTag::ALL {
        let [d1, d2, d3] = case.degrees();
        let e1 = random_expansion(&mut rng, d1, ORDER);
        let e2 = random_expansion(&mut rng, d2, ORDER);
        let e3 = random_expansion(&mut rng, d3, ORDER);
        let series = case.reduce(&e1, &e2, &e3).unwrap();
        for _ in 0..20 {
            let t = rng.gen_range(-2.0..2.0);
            let s = rng.gen_range(-2.0..2.0);
            let direct = theta_average(&e1, &e2, &e3, t, s, 64);
            let reduced = series.eval(t, s);
            assert!((direct - reduced).abs() < 1e-10, "{case}: t = {t}, s = {s}: {direct} vs {reduced}");
        }
    }
}

#[test]
fn reduction_at_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    let e1 = random_expansion(&mut rng, 3, 10);
    let e2 = random_expansion(&mut rng, 3, 10);
    let e3 = random_expansion(&mut rng, 3, 10);
    let series = angular_triple_reduce(&e1, &e2, &e3).unwrap();
    let (t, s) = (0.3f64.atanh(), 0.5f64.atanh());
    assert!((series.eval(t, s) - theta_average(&e1, &e2, &e3, t, s, 64)).abs() < 1e-10);
}

#[test]
fn ab_family_is_the_offset_three_bilinear() {
    let c = |re, im| Complex64::new(re, im);
    let a = DifferentialExpansion::new(3, vec![c(1.0, 0.5), c(0.2, -1.0), c(0.0, 0.3), c(2.0, 0.0), c(-1.0, 1.0)]).unwrap();
    let b = DifferentialExpansion::new(3, vec![c(0.4, 0.1), c(1.0, 1.0), c(-0.5, 0.0), c(0.3, 0.7), c(0.9, -0.2)]).unwrap();
    let s = angular_triple_reduce(&a, &a, &b).unwrap();
    assert_eq!(s.k1, 3);
    for n in 0..s.x.len() {
        assert_eq!(s.x[n], (a.coeff(0) * a.coeff(n) * b.coeff(n + 3).conj()).re);
    }
    for m in 0..s.y.len() {
        assert_eq!(s.y[m], (a.coeff(0) * a.coeff(m + 3).conj() * b.coeff(m)).re);
    }
}

#[test]
fn isolated_harmonics_average_to_zero() {
    // Re(a₀ e^{3iθ}) against e^{i(n+3)θ} e^{i(m+3)θ} has total harmonic
    // ±3 + n + m + 6 ≠ 0, so every such average vanishes.
    let a0 = Complex64::new(0.8, -0.6);
    for n in 0..6 {
        for m in 0..6 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..64 {
                let th = 2.0 * PI * k as f64 / 64.0;
                let base = (a0 * Complex64::from_polar(1.0, 3.0 * th)).re;
                acc += Complex64::from_polar(base, (n + m + 6) as f64 * th);
            }
            assert!(acc.norm() / 64.0 < 1e-14);
        }
    }
}

#[test]
fn case_reduction_checks_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let e3 = random_expansion(&mut rng, 3, 4);
    let e2 = random_expansion(&mut rng, 2, 4);
    assert!(matches!(CaseTag::AB.reduce(&e2, &e3, &e3), Err(DiskError::DegreeMismatch(_))));
    assert!(CaseTag::CD.reduce(&e2, &e3, &e3).is_ok());
}

#[test]
fn monte_carlo_of_odd_harmonic_is_zero_within_error() {
    let a = DifferentialExpansion::new(3, vec![Complex64::new(0.7, 0.4)]).unwrap();
    let mc = monte_carlo_triple(&a, &a, &a, 0.0, 0.0, 20_000, 5).unwrap();
    assert!(mc.stderr > 0.0);
    assert!(mc.estimate.abs() < 3.0 * mc.stderr, "{mc:?}");
}

#[test]
fn monte_carlo_agrees_with_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    let e1 = random_expansion(&mut rng, 3, 8);
    let e2 = random_expansion(&mut rng, 3, 8);
    let e3 = random_expansion(&mut rng, 3, 8);
    let exact = angular_triple_reduce(&e1, &e2, &e3).unwrap().eval(0.4, 0.7);
    let mc = monte_carlo_triple(&e1, &e2, &e3, 0.4, 0.7, 50_000, 6).unwrap();
    assert!((mc.estimate - exact).abs() < 4.0 * mc.stderr, "{mc:?} vs {exact}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_by_pi_shifts_the_direction(seed in any::<u64>(), d in 2u32..=3, t in -3.0f64..3.0, theta in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expansion(&mut rng, d, 8);
        let rotated = e.rotate_by_pi();
        for n in 0..=8 {
            let expect = if (n as u32 + d) % 2 == 0 { e.coeff(n) } else { -e.coeff(n) };
            prop_assert_eq!(rotated.coeff(n), expect);
        }
        let lhs = rotated.eval_on_flow(t, theta);
        let rhs = e.eval_on_flow(t, theta + PI);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn backward_flow_is_rotated_forward_flow(seed in any::<u64>(), d in 2u32..=3, t in 0.0f64..3.0, theta in 0.0f64..6.3) {
        // The point reached backwards in direction θ is the point reached
        // forwards in direction θ + π, with the velocity reversed.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expansion(&mut rng, d, 8);
        let back = e.eval_on_flow(-t, theta);
        let reversed = e.eval_on_flow(t, theta + PI) * if d % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((back - reversed).norm() < 1e-12);
    }

    #[test]
    fn reduction_is_trilinear_in_the_moving_factors(seed in any::<u64>(), lam in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e1 = random_expansion(&mut rng, 3, 6);
        let y = random_expansion(&mut rng, 3, 6);
        let y2 = random_expansion(&mut rng, 3, 6);
        let z = random_expansion(&mut rng, 2, 6);
        let sum: Vec<Complex64> = y.coeffs().iter().zip(y2.coeffs()).map(|(a, b)| a * lam + b).collect();
        let ys = DifferentialExpansion::new(3, sum).unwrap();
        let s1 = angular_triple_reduce(&e1, &y, &z).unwrap();
        let s2 = angular_triple_reduce(&e1, &y2, &z).unwrap();
        let ss = angular_triple_reduce(&e1, &ys, &z).unwrap();
        for n in 0..ss.x.len() {
            prop_assert!((ss.x[n] - (lam * s1.x[n] + s2.x[n])).abs() < 1e-12);
        }
        for m in 0..ss.y.len() {
            prop_assert!((ss.y[m] - (lam * s1.y[m] + s2.y[m])).abs() < 1e-12);
        }
    }
}
