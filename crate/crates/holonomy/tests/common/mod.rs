#![allow(dead_code)]

use holonomy::{FourierMode, OrbitData, Sampler};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random Fourier sampler of period `l` with at most five modes.
pub fn random_sampler(rng: &mut ChaCha8Rng, l: f64) -> Sampler {
    let count = rng.gen_range(1..=5);
    let modes = (0..count)
        .map(|_| FourierMode {
            n: rng.gen_range(-2..=2),
            coeff: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
        })
        .collect();
    Sampler::fourier(l, modes).unwrap()
}

/// An orbit of length `l` with all four samplers random.
pub fn random_orbit(rng: &mut ChaCha8Rng, l: f64) -> OrbitData {
    OrbitData::new(l)
        .unwrap()
        .with_alpha(random_sampler(rng, l))
        .with_beta(random_sampler(rng, l))
        .with_i(random_sampler(rng, l))
        .with_j(random_sampler(rng, l))
}

/// `∫_a^b f` for complex `f` by double-exponential quadrature.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let re = quadrature::double_exponential::integrate(|s| f(s).re, a, b, 1e-14).integral;
    let im = quadrature::double_exponential::integrate(|s| f(s).im, a, b, 1e-14).integral;
    Complex64::new(re, im)
}
