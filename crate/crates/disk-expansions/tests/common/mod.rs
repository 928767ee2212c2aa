#![allow(dead_code)]

use std::f64::consts::PI;

use disk_expansions::DifferentialExpansion;
use num_complex::Complex64;
use rand::Rng;

pub fn random_expansion<R: Rng>(rng: &mut R, degree: u32, order: usize) -> DifferentialExpansion {
    let coeffs = (0..=order)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    DifferentialExpansion::new(degree, coeffs).unwrap()
}

/// Trapezoid rule in θ with `points` nodes, exact for harmonics below `points`.
pub fn theta_average(
    e1: &DifferentialExpansion,
    e2: &DifferentialExpansion,
    e3: &DifferentialExpansion,
    t: f64,
    s: f64,
    points: usize,
) -> f64 {
    let mut acc = 0.0;
    for k in 0..points {
        let theta = 2.0 * PI * k as f64 / points as f64;
        acc += e1.eval_on_flow(0.0, theta).re * e2.eval_on_flow(t, theta).re * e3.eval_on_flow(s, theta).re;
    }
    acc / points as f64
}
