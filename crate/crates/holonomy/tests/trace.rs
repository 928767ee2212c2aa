mod common;

use common::random_sampler;
use holonomy::{
    eigenvalue_derivative_fd, parallel_transport, trace_derivative, BaseFrame, ConnectionFamily, GaugeField,
    HolonomyError, Mat3, Vec3, FD_STEP, SIMPSON_PANELS,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_family(rng: &mut ChaCha8Rng, l: f64) -> ConnectionFamily {
    let cubic = ConnectionFamily::cubic(l, random_sampler(rng, l)).unwrap();
    let quadratic = ConnectionFamily::quadratic(l, random_sampler(rng, l)).unwrap();
    cubic.plus(&quadratic).unwrap()
}

fn random_gauge(rng: &mut ChaCha8Rng, l: f64) -> GaugeField {
    let modes = (-1..=1)
        .map(|n| {
            let g = Mat3::from_fn(|_, _| Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)));
            (n, g)
        })
        .collect();
    GaugeField::new(l, modes).unwrap()
}

#[test]
fn trace_formula_matches_monodromy_over_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let l = rng.gen_range(0.5..6.0);
        let fam = random_family(&mut rng, l);
        let base = BaseFrame::new(l).unwrap();
        let tr = trace_derivative(&fam, &base, SIMPSON_PANELS).unwrap();
        let fd = eigenvalue_derivative_fd(&fam, FD_STEP).unwrap();
        worst = worst.max((tr - fd).norm());
        assert!((tr - fd).norm() < 1e-6, "l = {l}: trace {tr}, fd {fd}");
    }
    assert!(worst < 1e-6);
}

#[test]
fn trace_derivative_is_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let l = rng.gen_range(0.5..6.0);
        let fam = random_family(&mut rng, l);
        let shifted = fam.gauge_shifted(&random_gauge(&mut rng, l)).unwrap();
        let base = BaseFrame::new(l).unwrap();
        let a = trace_derivative(&fam, &base, SIMPSON_PANELS).unwrap();
        let b = trace_derivative(&shifted, &base, SIMPSON_PANELS).unwrap();
        assert!((a - b).norm() < 1e-7, "l = {l}: {a} vs {b}");
        let fd = eigenvalue_derivative_fd(&shifted, FD_STEP).unwrap();
        assert!((fd - a).norm() < 1e-6, "l = {l}: fd {fd} vs {a}");
    }
}

#[test]
fn transport_matches_the_matrix_exponential() {
    // For constant A the transport is exp(−T A) V₀; compare against a
    // Taylor series summed to convergence.
    let a = Mat3::new(
        Complex64::new(0.2, 0.1), Complex64::new(-0.4, 0.0), Complex64::new(0.0, 0.3),
        Complex64::new(0.5, 0.0), Complex64::new(-0.1, 0.2), Complex64::new(0.3, -0.1),
        Complex64::new(0.0, 0.0), Complex64::new(0.6, 0.4), Complex64::new(0.1, 0.0),
    );
    let t_end = 2.3;
    let v0 = Vec3::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-0.5, 0.5));
    let x = -a * Complex64::new(t_end, 0.0);
    let mut term = Mat3::identity();
    let mut exp = Mat3::identity();
    for k in 1..60 {
        term = term * x / Complex64::new(k as f64, 0.0);
        exp += term;
    }
    let out = parallel_transport(&|_| a, &v0, t_end, 512).unwrap();
    assert!((out.value - exp * v0).norm() < 1e-11);
    assert!(out.error_estimate < 1e-10);
}

#[test]
fn degenerate_length_is_rejected() {
    assert!(matches!(BaseFrame::new(1e-11), Err(HolonomyError::DegenerateSpectrum { .. })));
}
