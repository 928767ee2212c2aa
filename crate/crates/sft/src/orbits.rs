use serde::{Deserialize, Serialize};

use crate::{DepthKFunction, Scalar, Sft, SftError, Word, DEFAULT_WORD_BUDGET};

/// A periodic orbit, stored as the lexicographically smallest rotation of a
/// primitive admissible cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    /// One period of the orbit, in canonical rotation.
    pub cycle: Word,
}

impl PeriodicOrbit {
    /// Canonicalizes an admissible cycle.
    ///
    /// Non-primitive cycles (a smaller block repeated) are reduced to the
    /// primitive block.
    pub fn new(sft: &Sft, cycle: &[usize]) -> Result<Self, SftError> {
        if !sft.is_admissible_cycle(cycle) {
            return Err(SftError::NotAdmissible {
                word: cycle.to_vec(),
            });
        }
        let p = primitive_period(cycle);
        Ok(PeriodicOrbit {
            cycle: Word::new(canonical_rotation(&cycle[..p])),
        })
    }

    /// The period (length of the cycle).
    pub fn period(&self) -> usize {
        self.cycle.len()
    }
}

/// The lexicographically smallest rotation of `word`.
pub fn canonical_rotation(word: &[usize]) -> Vec<usize> {
    let n = word.len();
    (0..n)
        .map(|r| word[r..].iter().chain(&word[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn primitive_period(word: &[usize]) -> usize {
    let n = word.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| word[i] == word[i - p]))
        .unwrap_or(n)
}

fn is_canonical_primitive(word: &[usize]) -> bool {
    let n = word.len();
    // A primitive word equal to its minimal rotation is strictly smaller
    // than every nontrivial rotation (a Lyndon word).
    (1..n).all(|r| {
        let rot = word[r..].iter().chain(&word[..r]);
        word.iter().lt(rot)
    })
}

/// All periodic orbits with period at most `max_period`, each once, in
/// order of period and then lexicographic order of the canonical cycle.
pub fn periodic_orbits(sft: &Sft, max_period: usize) -> Result<Vec<PeriodicOrbit>, SftError> {
    periodic_orbits_with_budget(sft, max_period, DEFAULT_WORD_BUDGET)
}

/// As [`periodic_orbits`], failing if more than `budget` candidate words
/// would have to be examined.
pub fn periodic_orbits_with_budget(
    sft: &Sft,
    max_period: usize,
    budget: usize,
) -> Result<Vec<PeriodicOrbit>, SftError> {
    let total: u128 = (1..=max_period).map(|p| sft.word_count(p)).sum();
    if total > budget as u128 {
        return Err(SftError::CapacityExceeded {
            count: total,
            budget,
        });
    }
    let mut out = Vec::new();
    for p in 1..=max_period {
        let mut stack: Vec<usize> = Vec::with_capacity(p);
        collect_cycles(sft, p, &mut stack, &mut out);
    }
    Ok(out)
}

fn collect_cycles(sft: &Sft, p: usize, stack: &mut Vec<usize>, out: &mut Vec<PeriodicOrbit>) {
    if stack.len() == p {
        if sft.allowed(stack[p - 1], stack[0]) && is_canonical_primitive(stack) {
            out.push(PeriodicOrbit {
                cycle: Word::new(stack.clone()),
            });
        }
        return;
    }
    for b in 0..sft.alphabet_size() {
        if let Some(&last) = stack.last() {
            if !sft.allowed(last, b) {
                continue;
            }
            // A Lyndon word never has a symbol smaller than its first one.
            if b < stack[0] {
                continue;
            }
        }
        stack.push(b);
        collect_cycles(sft, p, stack, out);
        stack.pop();
    }
}

/// The Birkhoff sum `S_n f(x) = Σ_{i<n} f(σ^i x)` along a finite word,
/// which must have length at least `n + k − 1`.
pub fn birkhoff_sum<T: Scalar>(
    f: &DepthKFunction<T>,
    word: &[usize],
    n: usize,
) -> Result<T, SftError> {
    let k = f.depth();
    let needed = n + k - 1;
    if word.len() < needed {
        return Err(SftError::WordTooShort {
            len: word.len(),
            needed,
        });
    }
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc
            + f.eval(&word[i..i + k]).ok_or_else(|| SftError::NotAdmissible {
                word: word[i..i + k].to_vec(),
            })?;
    }
    Ok(acc)
}

/// The Birkhoff sum of length `n` along the periodic sequence generated by
/// `cycle`. With `n` equal to the period this is the orbit period of `f`.
pub fn birkhoff_sum_cyclic<T: Scalar>(
    f: &DepthKFunction<T>,
    cycle: &[usize],
    n: usize,
) -> Result<T, SftError> {
    if cycle.is_empty() {
        return Err(SftError::WordTooShort { len: 0, needed: 1 });
    }
    let len = n + f.depth() - 1;
    let word: Vec<usize> = (0..len).map(|i| cycle[i % cycle.len()]).collect();
    birkhoff_sum(f, &word, n)
}

/// Outcome of a Livšic period comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LivsicReport {
    /// Whether every period difference was within tolerance.
    pub holds: bool,
    /// Largest `|S_p(f − g)(a)|` over the orbits examined.
    pub worst_residual: f64,
    /// Orbit attaining the largest residual (absent if there were none).
    pub worst_orbit: Option<PeriodicOrbit>,
    /// Number of orbits examined.
    pub orbits_checked: usize,
}

/// Compares the periods of `f` and `g` over every periodic orbit of period
/// at most `max_period`.
///
/// Two Hölder functions on a mixing shift are cohomologous exactly when all
/// their periods agree, so this is the finite version of that test.
pub fn livsic_coboundary_test(
    f: &DepthKFunction<f64>,
    g: &DepthKFunction<f64>,
    max_period: usize,
    tol: f64,
) -> Result<LivsicReport, SftError> {
    let diff = f.try_sub(g)?;
    let orbits = periodic_orbits(diff.sft(), max_period)?;
    let mut worst = 0.0f64;
    let mut worst_orbit = None;
    for orbit in &orbits {
        let r = birkhoff_sum_cyclic(&diff, &orbit.cycle.symbols, orbit.period())?.abs();
        if r > worst || worst_orbit.is_none() {
            worst = worst.max(r);
            worst_orbit = Some(orbit.clone());
        }
    }
    Ok(LivsicReport {
        holds: worst <= tol,
        worst_residual: worst,
        worst_orbit,
        orbits_checked: orbits.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::Cylinders;

    fn strings(orbits: &[PeriodicOrbit]) -> Vec<String> {
        orbits.iter().map(|o| o.cycle.to_string()).collect()
    }

    #[test]
    fn full_two_shift_orbits_up_to_two() {
        let s = Sft::full_shift(2).unwrap();
        assert_eq!(strings(&periodic_orbits(&s, 2).unwrap()), vec!["0", "1", "01"]);
    }

    #[test]
    fn golden_mean_orbits_up_to_two() {
        let s = Sft::golden_mean();
        assert_eq!(strings(&periodic_orbits(&s, 2).unwrap()), vec!["0", "01"]);
    }

    #[test]
    fn zero_max_period_is_empty() {
        assert!(periodic_orbits(&Sft::golden_mean(), 0).unwrap().is_empty());
    }

    #[test]
    fn orbit_counts_match_necklace_formula() {
        // Primitive necklaces on 2 letters: 2, 1, 2, 3, 6, 9, 18, 30.
        let s = Sft::full_shift(2).unwrap();
        let o = periodic_orbits(&s, 8).unwrap();
        let mut counts = [0usize; 9];
        for orbit in &o {
            counts[orbit.period()] += 1;
        }
        assert_eq!(&counts[1..], &[2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn orbit_constructor_canonicalizes() {
        let s = Sft::full_shift(2).unwrap();
        let o = PeriodicOrbit::new(&s, &[1, 0, 1, 0]).unwrap();
        assert_eq!(o.cycle.to_string(), "01");
        assert!(PeriodicOrbit::new(&Sft::golden_mean(), &[1, 1]).is_err());
    }

    #[test]
    fn birkhoff_of_constant() {
        let s = Sft::full_shift(2).unwrap();
        let c = DepthKFunction::constant(Arc::new(Cylinders::new(&s, 2).unwrap()), 1.5);
        assert_eq!(birkhoff_sum_cyclic(&c, &[0, 1, 1], 7).unwrap(), 10.5);
    }

    #[test]
    fn birkhoff_of_indicator_counts_visits() {
        let s = Sft::full_shift(2).unwrap();
        let ind = DepthKFunction::<f64>::indicator(Arc::new(Cylinders::new(&s, 1).unwrap()), 0);
        assert_eq!(birkhoff_sum_cyclic(&ind, &[0, 1], 2).unwrap(), 1.0);
    }

    #[test]
    fn short_words_are_rejected() {
        let s = Sft::full_shift(2).unwrap();
        let f = DepthKFunction::constant(Arc::new(Cylinders::new(&s, 3).unwrap()), 1.0);
        assert_eq!(
            birkhoff_sum(&f, &[0, 1, 0], 2),
            Err(SftError::WordTooShort { len: 3, needed: 4 })
        );
    }

    #[test]
    fn indicator_is_not_cohomologous_to_zero() {
        let s = Sft::full_shift(2).unwrap();
        let cyl = Arc::new(Cylinders::new(&s, 1).unwrap());
        let ind = DepthKFunction::<f64>::indicator(Arc::clone(&cyl), 0);
        let zero = DepthKFunction::constant(cyl, 0.0);
        let r = livsic_coboundary_test(&ind, &zero, 4, 1e-12).unwrap();
        assert!(!r.holds);
        assert_eq!(r.worst_residual, 3.0);
        let r1 = livsic_coboundary_test(&ind, &zero, 1, 1e-12).unwrap();
        assert_eq!(r1.worst_orbit.unwrap().cycle.to_string(), "0");
    }
}
