//! Subshifts of finite type.
//!
//! A one-sided shift of finite type is described by a square 0/1 transition
//! matrix `A`: a sequence `x0 x1 x2 ...` is admissible when
//! `A[x_i][x_{i+1}] = 1` for every `i`. This crate provides
//!
//! * [`Sft`], the validated transition structure with its mixing power,
//! * [`Cylinders`], the sorted set of admissible words of a fixed length,
//! * [`DepthKFunction`], locally constant functions that depend on the
//!   first `k` symbols of a sequence,
//! * periodic-orbit enumeration, Birkhoff sums and the Livšic period test.
//!
//! Locally constant functions are dense in the Hölder functions, so a depth-k
//! function is the finite stand-in for a Hölder potential throughout the
//! workspace.

mod cylinders;
mod error;
mod function;
mod orbits;

pub use cylinders::{Cylinders, Word, DEFAULT_WORD_BUDGET};
pub use error::SftError;
pub use function::{DepthKFunction, Scalar};
pub use orbits::{
    birkhoff_sum, birkhoff_sum_cyclic, canonical_rotation, livsic_coboundary_test,
    periodic_orbits, periodic_orbits_with_budget, LivsicReport, PeriodicOrbit,
};

use serde::{Deserialize, Serialize};

/// A shift of finite type given by a square 0/1 transition matrix.
///
/// The matrix is validated on construction: it must be square, contain only
/// zeros and ones, and every symbol must have at least one successor and one
/// predecessor. The smallest `M ≤ n²` with `A^M > 0` entrywise is recorded
/// as [`Sft::mixing_power`]; `None` means the shift is not topologically
/// mixing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SftJson", into = "SftJson")]
pub struct Sft {
    alphabet_size: usize,
    transition: Vec<Vec<u8>>,
    mixing_power: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct SftJson {
    alphabet_size: usize,
    transition: Vec<Vec<u8>>,
}

impl TryFrom<SftJson> for Sft {
    type Error = SftError;

    fn try_from(raw: SftJson) -> Result<Self, SftError> {
        if raw.transition.len() != raw.alphabet_size {
            return Err(SftError::NotSquare {
                rows: raw.transition.len(),
                cols: raw.alphabet_size,
            });
        }
        Sft::new(raw.transition)
    }
}

impl From<Sft> for SftJson {
    fn from(s: Sft) -> Self {
        SftJson {
            alphabet_size: s.alphabet_size,
            transition: s.transition,
        }
    }
}

impl Sft {
    /// Validates a transition matrix and computes its mixing power.
    pub fn new(transition: Vec<Vec<u8>>) -> Result<Self, SftError> {
        let n = transition.len();
        if n == 0 {
            return Err(SftError::EmptyMatrix);
        }
        for row in &transition {
            if row.len() != n {
                return Err(SftError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        for (i, row) in transition.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e > 1 {
                    return Err(SftError::InvalidEntry {
                        row: i,
                        col: j,
                        value: e,
                    });
                }
            }
        }
        for s in 0..n {
            let has_succ = transition[s].iter().any(|&e| e == 1);
            let has_pred = (0..n).any(|r| transition[r][s] == 1);
            if !has_succ || !has_pred {
                return Err(SftError::EmptyRowOrColumn { symbol: s });
            }
        }
        let mixing_power = compute_mixing_power(&transition);
        Ok(Sft {
            alphabet_size: n,
            transition,
            mixing_power,
        })
    }

    /// The full shift on `n` symbols.
    pub fn full_shift(n: usize) -> Result<Self, SftError> {
        Sft::new(vec![vec![1; n]; n])
    }

    /// The golden-mean shift `[[1,1],[1,0]]` (no two consecutive `1`s).
    pub fn golden_mean() -> Self {
        Sft::new(vec![vec![1, 1], vec![1, 0]]).expect("golden-mean matrix is valid")
    }

    /// Number of symbols.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// The transition matrix.
    pub fn transition(&self) -> &[Vec<u8>] {
        &self.transition
    }

    /// Whether `a → b` is an allowed transition.
    #[inline]
    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.transition[a][b] == 1
    }

    /// Smallest `M` with `A^M > 0`, if one exists with `M ≤ n²`.
    pub fn mixing_power(&self) -> Option<usize> {
        self.mixing_power
    }

    /// Whether the shift is topologically mixing.
    pub fn is_mixing(&self) -> bool {
        self.mixing_power.is_some()
    }

    /// Whether a finite word is admissible.
    pub fn is_admissible(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.alphabet_size)
            && word.windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    /// Whether a word is admissible when read cyclically.
    pub fn is_admissible_cycle(&self, word: &[usize]) -> bool {
        !word.is_empty()
            && self.is_admissible(word)
            && self.allowed(word[word.len() - 1], word[0])
    }

    /// Number of admissible words of length `k`, saturating at `u128::MAX`.
    ///
    /// This is the sum of the entries of `A^{k−1}`.
    pub fn word_count(&self, k: usize) -> u128 {
        if k == 0 {
            return 1;
        }
        let n = self.alphabet_size;
        let mut counts = vec![1u128; n];
        for _ in 1..k {
            let mut next = vec![0u128; n];
            for (a, &c) in counts.iter().enumerate() {
                for (b, slot) in next.iter_mut().enumerate() {
                    if self.allowed(a, b) {
                        *slot = slot.saturating_add(c);
                    }
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// All admissible words of length `k` in lexicographic order, subject to
    /// the default budget of [`DEFAULT_WORD_BUDGET`] words.
    pub fn admissible_words(&self, k: usize) -> Result<Vec<Word>, SftError> {
        self.admissible_words_with_budget(k, DEFAULT_WORD_BUDGET)
    }

    /// All admissible words of length `k`, failing with
    /// [`SftError::CapacityExceeded`] if there are more than `budget`.
    pub fn admissible_words_with_budget(
        &self,
        k: usize,
        budget: usize,
    ) -> Result<Vec<Word>, SftError> {
        let cyl = Cylinders::with_budget(self, k, budget)?;
        Ok((0..cyl.len()).map(|i| Word::new(cyl.word(i))).collect())
    }

    /// The diagnostic metric `d_α(x, y) = α^N`, where `N` is the first index
    /// at which the two sequences differ (0 if they agree on the common
    /// prefix).
    pub fn d_alpha(x: &[usize], y: &[usize], alpha: f64) -> f64 {
        match x.iter().zip(y).position(|(a, b)| a != b) {
            Some(n) => alpha.powi(n as i32),
            None => 0.0,
        }
    }
}

fn compute_mixing_power(t: &[Vec<u8>]) -> Option<usize> {
    let n = t.len();
    let mut power: Vec<Vec<bool>> = t
        .iter()
        .map(|r| r.iter().map(|&e| e == 1).collect())
        .collect();
    for m in 1..=n * n {
        if power.iter().all(|r| r.iter().all(|&e| e)) {
            return Some(m);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] {
                    for j in 0..n {
                        if t[k][j] == 1 {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        power = next;
    }
    None
}
