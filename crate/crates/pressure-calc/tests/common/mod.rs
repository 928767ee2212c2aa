#![allow(dead_code)]

use pressure_calc::{Equilibrium, PolynomialFamily};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sft::{DepthKFunction, Sft};

/// A random mixing shift on 2 to 4 symbols.
pub fn random_sft(rng: &mut ChaCha8Rng) -> Sft {
    loop {
        let n = rng.gen_range(2..=4);
        let t: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| u8::from(rng.gen_bool(0.7))).collect())
            .collect();
        if let Ok(s) = Sft::new(t) {
            if s.is_mixing() {
                return s;
            }
        }
    }
}

/// A random depth-`k` function with values in `[−scale, scale]`.
pub fn random_fn(sft: &Sft, k: usize, scale: f64, rng: &mut ChaCha8Rng) -> DepthKFunction<f64> {
    let cyl = std::sync::Arc::new(sft::Cylinders::new(sft, k).unwrap());
    let values = (0..cyl.len()).map(|_| rng.gen_range(-scale..scale)).collect();
    DepthKFunction::new(cyl, values).unwrap()
}

/// A random one-parameter family `f_s = f₀ + s a + s²/2 b + s³/6 c` with
/// `f₀` normalized and `a` centered, so that `P(f₀) = 0` and `P'(0) = 0`.
pub fn random_family(rng: &mut ChaCha8Rng) -> PolynomialFamily {
    let s = random_sft(rng);
    let mut depth = || rng.gen_range(1..=3);
    let (k0, ka, kb, kc) = (depth(), depth(), depth(), depth());
    let raw = random_fn(&s, k0, 0.5, rng);
    let eq = Equilibrium::new(&raw).unwrap();
    let f0 = eq.potential().clone();
    let a = random_fn(&s, ka, 0.5, rng);
    let a = a.add_constant(-eq.integrate(&a).unwrap());
    PolynomialFamily::new(1, f0)
        .unwrap()
        .with_term(&[0], a)
        .unwrap()
        .with_term(&[0, 0], random_fn(&s, kb, 0.5, rng))
        .unwrap()
        .with_term(&[0, 0, 0], random_fn(&s, kc, 0.5, rng))
        .unwrap()
}

/// `(1/n) E[S_n g₁ · S_n g₂ · S_n g₃]` (or the second moment when `g3` is
/// `None`) for the stationary Markov chain of `eq`, by forward recursion
/// over the chain states. Mixed moments of the partial sums are carried per
/// state and updated with the binomial rule at each step.
pub fn markov_moment(eq: &Equilibrium, gs: &[&DepthKFunction<f64>], n: usize) -> f64 {
    let d = gs.iter().map(|g| g.depth()).max().unwrap().max(eq.depth());
    let eq = eq.at_depth(d).unwrap();
    let cyl = eq.cylinders().clone();
    let m = eq.measure().weights().to_vec();
    let vals: Vec<Vec<f64>> = gs
        .iter()
        .map(|g| g.promote_to(&cyl).unwrap().into_values())
        .collect();
    let k = gs.len();
    let masks = 1usize << k;
    // Mass of each (d−1)-word context, for the conditional transitions.
    let mut context = std::collections::BTreeMap::new();
    for (i, w) in cyl.words().enumerate() {
        *context.entry(w[1..].to_vec()).or_insert(0.0) += m[i];
    }
    let mut state: Vec<Vec<f64>> = m
        .iter()
        .map(|&p| {
            let mut v = vec![0.0; masks];
            v[0] = p;
            v
        })
        .collect();
    for step in 0..n {
        // Add g_j(X_step) to every partial sum.
        for (u, mom) in state.iter_mut().enumerate() {
            let x: Vec<f64> = (0..k).map(|j| vals[j][u]).collect();
            let old = mom.clone();
            for mask in 0..masks {
                let mut acc = 0.0;
                let mut sub = mask;
                loop {
                    let mut coeff = 1.0;
                    for (j, xj) in x.iter().enumerate() {
                        if mask & (1 << j) != 0 && sub & (1 << j) == 0 {
                            coeff *= xj;
                        }
                    }
                    acc += coeff * old[sub];
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
                mom[mask] = acc;
            }
        }
        if step + 1 == n {
            break;
        }
        let mut next = vec![vec![0.0; masks]; cyl.len()];
        for (u, w) in cyl.words().enumerate() {
            let ctx = context[&w[1..].to_vec()];
            for &v in cyl.successors(u) {
                let p = if ctx > 0.0 { m[v] / ctx } else { 0.0 };
                for mask in 0..masks {
                    next[v][mask] += p * state[u][mask];
                }
            }
        }
        state = next;
    }
    state.iter().map(|mom| mom[masks - 1]).sum::<f64>() / n as f64
}
