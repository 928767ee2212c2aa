//! Seeded random inputs shared by the runners and the acceptance suite.

use std::sync::Arc;

use holonomy::{FourierMode, OrbitData, Sampler};
use num_complex::Complex64;
use pressure_calc::{Equilibrium, PolynomialFamily};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sft::{Cylinders, DepthKFunction, Sft};
use suspension::{FiberProfile, FlowFunction, Period};

use crate::CliError;

/// A random mixing shift on `2..=max_symbols` symbols, each transition
/// allowed with probability `density`.
pub fn random_sft(rng: &mut ChaCha8Rng, max_symbols: usize, density: f64) -> Sft {
    loop {
        let n = rng.gen_range(2..=max_symbols.max(2));
        let t: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| u8::from(rng.gen_bool(density))).collect())
            .collect();
        if let Ok(s) = Sft::new(t) {
            if s.is_mixing() {
                return s;
            }
        }
    }
}

/// A depth-`k` function with values uniform in `[lo, hi)`.
pub fn random_function(
    sft: &Sft,
    k: usize,
    lo: f64,
    hi: f64,
    rng: &mut ChaCha8Rng,
) -> Result<DepthKFunction<f64>, CliError> {
    let cyl = Arc::new(Cylinders::new(sft, k).map_err(CliError::config)?);
    let values = (0..cyl.len()).map(|_| rng.gen_range(lo..hi)).collect();
    DepthKFunction::new(cyl, values).map_err(CliError::config)
}

/// `f_s = f₀ + s a + s²/2 b + s³/6 c` around the normalization of `base`,
/// with `a` centered for the equilibrium state of `f₀` and each term of
/// random depth `1..=3` with values in `[−0.5, 0.5)`.
pub fn random_potential_family(
    base: &DepthKFunction<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<PolynomialFamily, CliError> {
    let sft = base.sft().clone();
    let eq = Equilibrium::new(base).map_err(CliError::numerical)?;
    let f0 = eq.potential().clone();
    let term = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..=3);
        random_function(&sft, k, -0.5, 0.5, rng)
    };
    let a = term(rng)?;
    let a = a.add_constant(-eq.integrate(&a).map_err(CliError::numerical)?);
    let (b, c) = (term(rng)?, term(rng)?);
    PolynomialFamily::new(1, f0)
        .and_then(|f| f.with_term(&[0], a))
        .and_then(|f| f.with_term(&[0, 0], b))
        .and_then(|f| f.with_term(&[0, 0, 0], c))
        .map_err(CliError::numerical)
}

/// A flow function of random depth `1..=2` whose fiber profiles are
/// five-coefficient Fourier series over the roof, coefficients in
/// `[−scale, scale)`.
pub fn random_flow_function(sft: &Sft, scale: f64, rng: &mut ChaCha8Rng) -> Result<FlowFunction, CliError> {
    let k = rng.gen_range(1..=2);
    let cyl = Arc::new(Cylinders::new(sft, k).map_err(CliError::config)?);
    let fibers = (0..cyl.len())
        .map(|_| FiberProfile::Fourier {
            coeffs: (0..5).map(|_| rng.gen_range(-scale..scale)).collect(),
            period: Period::ROOF,
        })
        .collect();
    FlowFunction::new(cyl, fibers).map_err(CliError::config)
}

/// A Fourier sampler of period `l` with one to five modes of frequency in
/// `−2..=2` and coefficients in the square `[−0.5, 0.5)²`.
pub fn random_sampler(rng: &mut ChaCha8Rng, l: f64) -> Result<Sampler, CliError> {
    let count = rng.gen_range(1..=5);
    let modes = (0..count)
        .map(|_| FourierMode {
            n: rng.gen_range(-2..=2),
            coeff: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
        })
        .collect();
    Sampler::fourier(l, modes).map_err(CliError::config)
}

/// An orbit of length `l` with all four samplers random.
pub fn random_orbit(rng: &mut ChaCha8Rng, l: f64) -> Result<OrbitData, CliError> {
    Ok(OrbitData::new(l)
        .map_err(CliError::config)?
        .with_alpha(random_sampler(rng, l)?)
        .with_beta(random_sampler(rng, l)?)
        .with_i(random_sampler(rng, l)?)
        .with_j(random_sampler(rng, l)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generators_are_reproducible() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let s = random_sft(&mut rng, 4, 0.7);
            let f = random_function(&s, 2, -1.0, 1.0, &mut rng).unwrap();
            (s, f.values().to_vec())
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn family_base_has_zero_pressure() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_sft(&mut rng, 3, 0.7);
        let raw = random_function(&s, 2, -1.0, 1.0, &mut rng).unwrap();
        let fam = random_potential_family(&raw, &mut rng).unwrap();
        assert!(transfer::pressure(fam.base()).unwrap().abs() < 1e-12);
    }
}
