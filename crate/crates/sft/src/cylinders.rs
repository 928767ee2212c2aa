use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Sft, SftError};

/// Default cap on the number of words any single enumeration may produce.
pub const DEFAULT_WORD_BUDGET: usize = 1 << 24;

/// A finite word over the alphabet `0..n`.
///
/// Words print as a plain digit string when every symbol is below 10 and as
/// a dot-separated list otherwise (`"0110"`, `"3.11.4"`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    /// The symbols of the word.
    pub symbols: Vec<usize>,
}

impl Word {
    /// Wraps a symbol sequence.
    pub fn new(symbols: impl Into<Vec<usize>>) -> Self {
        Word {
            symbols: symbols.into(),
        }
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Whether the word is empty.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.iter().all(|&s| s < 10) {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl std::str::FromStr for Word {
    type Err = SftError;

    fn from_str(s: &str) -> Result<Self, SftError> {
        let bad = || SftError::TableMismatch(format!("cannot parse word {s:?}"));
        let symbols = if s.contains('.') {
            s.split('.')
                .map(|p| p.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Word { symbols })
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = SftError;

    fn try_from(s: String) -> Result<Self, SftError> {
        s.parse()
    }
}

/// The admissible words of a fixed length `k`, sorted lexicographically.
///
/// Each word is also encoded as the base-`n` integer of its symbols, so
/// lexicographic order coincides with numeric order and lookups are binary
/// searches. The shift adjacency (which `k`-words can follow a given one
/// after dropping the first symbol) is precomputed.
#[derive(Debug, Clone)]
pub struct Cylinders {
    sft: Sft,
    depth: usize,
    codes: Vec<u64>,
    symbols: Vec<usize>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
}

impl Cylinders {
    /// Enumerates admissible `k`-words with the default budget.
    pub fn new(sft: &Sft, k: usize) -> Result<Self, SftError> {
        Self::with_budget(sft, k, DEFAULT_WORD_BUDGET)
    }

    /// Enumerates admissible `k`-words, failing if there are more than
    /// `budget` of them.
    pub fn with_budget(sft: &Sft, k: usize, budget: usize) -> Result<Self, SftError> {
        assert!(k >= 1, "cylinder depth must be at least 1");
        let count = sft.word_count(k);
        let n = sft.alphabet_size() as u64;
        if count > budget as u128 || n.checked_pow(k as u32).is_none() {
            return Err(SftError::CapacityExceeded { count, budget });
        }
        let mut words: Vec<Vec<usize>> = (0..sft.alphabet_size()).map(|s| vec![s]).collect();
        for _ in 1..k {
            let mut next = Vec::with_capacity(words.len() * 2);
            for w in &words {
                let last = w[w.len() - 1];
                for b in 0..sft.alphabet_size() {
                    if sft.allowed(last, b) {
                        let mut v = w.clone();
                        v.push(b);
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        let codes: Vec<u64> = words.iter().map(|w| encode(w, n)).collect();
        let symbols: Vec<usize> = words.into_iter().flatten().collect();
        let mut cyl = Cylinders {
            sft: sft.clone(),
            depth: k,
            codes,
            symbols,
            successors: Vec::new(),
            predecessors: Vec::new(),
        };
        cyl.build_adjacency();
        Ok(cyl)
    }

    fn build_adjacency(&mut self) {
        let len = self.len();
        let n = self.sft.alphabet_size();
        let mut successors = vec![Vec::new(); len];
        let mut predecessors = vec![Vec::new(); len];
        let mut buf = vec![0usize; self.depth];
        for (i, succ) in successors.iter_mut().enumerate() {
            let w = self.word(i);
            buf[..self.depth - 1].copy_from_slice(&w[1..]);
            let last = w[self.depth - 1];
            for b in 0..n {
                if !self.sft.allowed(last, b) {
                    continue;
                }
                buf[self.depth - 1] = b;
                if let Some(j) = self.index_of(&buf) {
                    succ.push(j);
                }
            }
        }
        for (i, succ) in successors.iter().enumerate() {
            for &j in succ {
                predecessors[j].push(i);
            }
        }
        self.successors = successors;
        self.predecessors = predecessors;
    }

    /// The underlying shift.
    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    /// Word length `k`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of admissible `k`-words.
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    /// Whether there are no words (never true for a validated shift).
    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// The `i`-th word in lexicographic order.
    #[inline]
    pub fn word(&self, i: usize) -> &[usize] {
        &self.symbols[i * self.depth..(i + 1) * self.depth]
    }

    /// Iterates over all words in order.
    pub fn words(&self) -> impl Iterator<Item = &[usize]> {
        self.symbols.chunks(self.depth)
    }

    /// Index of a `k`-word, or `None` if it is not admissible.
    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        if word.len() != self.depth {
            return None;
        }
        let n = self.sft.alphabet_size();
        if word.iter().any(|&s| s >= n) {
            return None;
        }
        self.codes.binary_search(&encode(word, n as u64)).ok()
    }

    /// Indices `j` such that word `j` equals word `i` shifted left by one
    /// symbol with an admissible symbol appended.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    /// Indices `j` such that word `i` is a successor of word `j`.
    pub fn predecessors(&self, i: usize) -> &[usize] {
        &self.predecessors[i]
    }

    /// Whether two cylinder sets describe the same words over the same shift.
    pub fn same_as(&self, other: &Cylinders) -> bool {
        self.depth == other.depth && self.sft == other.sft
    }
}

fn encode(word: &[usize], n: u64) -> u64 {
    word.iter().fold(0u64, |acc, &s| acc * n + s as u64)
}
