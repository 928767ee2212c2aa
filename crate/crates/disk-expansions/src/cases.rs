use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DiskError;
use crate::expansion::DifferentialExpansion;
use crate::triple::{angular_triple_reduce, TripleSeries};

/// The five triple-correlation configurations with their coefficient
/// families. Labels `a`, `b` are cubic differentials and `c`, `d` quadratic
/// ones; the first label sits at the base point, the other two at flow times
/// `t` and `s`.
///
/// | case | labels | families |
/// |------|--------|----------|
/// | AB | `(a; a; b)` | `A`, `B` |
/// | CD | `(c; a; a)` | `C` (both halves), auxiliary `(a; c; a)`: `P`, `D` |
/// | EF | `(c; c; a)` | `E`, `F` |
/// | GH | `(c; d; a)` | `G`, `H`, with `c ↔ d` antisymmetry |
/// | IJ | `(a; b; c)` | `I`, `J`, with `a ↔ b` antisymmetry |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    AB,
    CD,
    EF,
    GH,
    IJ,
}

/// Ordering of three labelled differentials and the names of its two
/// coefficient families `Xₙ` and `Yₘ` (see [`TripleSeries`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LabelOrdering {
    pub labels: [char; 3],
    pub x: &'static str,
    pub y: &'static str,
}

impl LabelOrdering {
    pub fn degrees(&self) -> [u32; 3] {
        self.labels.map(label_degree)
    }

    /// Offsets `(k₁, k₂)`.
    pub fn offsets(&self) -> (usize, usize) {
        let [d1, d2, d3] = self.degrees();
        ((d1 + d2 - d3) as usize, (d1 + d3 - d2) as usize)
    }
}

pub(crate) fn label_degree(label: char) -> u32 {
    match label {
        'a' | 'b' => 3,
        _ => 2,
    }
}

const fn ord(labels: [char; 3], x: &'static str, y: &'static str) -> LabelOrdering {
    LabelOrdering { labels, x, y }
}

const AB_ORDERINGS: &[LabelOrdering] = &[ord(['a', 'a', 'b'], "A", "B")];
const CD_ORDERINGS: &[LabelOrdering] = &[ord(['c', 'a', 'a'], "C", "C"), ord(['a', 'c', 'a'], "P", "D")];
const EF_ORDERINGS: &[LabelOrdering] = &[ord(['c', 'c', 'a'], "E", "F")];
const GH_ORDERINGS: &[LabelOrdering] = &[ord(['c', 'd', 'a'], "G", "H")];
const IJ_ORDERINGS: &[LabelOrdering] = &[ord(['a', 'b', 'c'], "I", "J")];

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [CaseTag::AB, CaseTag::CD, CaseTag::EF, CaseTag::GH, CaseTag::IJ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::AB => "AB",
            CaseTag::CD => "CD",
            CaseTag::EF => "EF",
            CaseTag::GH => "GH",
            CaseTag::IJ => "IJ",
        }
    }

    /// Declared orderings; the first is the primary one.
    pub(crate) fn orderings(self) -> &'static [LabelOrdering] {
        match self {
            CaseTag::AB => AB_ORDERINGS,
            CaseTag::CD => CD_ORDERINGS,
            CaseTag::EF => EF_ORDERINGS,
            CaseTag::GH => GH_ORDERINGS,
            CaseTag::IJ => IJ_ORDERINGS,
        }
    }

    /// Pair of equal-degree labels whose exchange negates the correlation.
    pub(crate) fn exchange(self) -> Option<(char, char)> {
        match self {
            CaseTag::GH => Some(('c', 'd')),
            CaseTag::IJ => Some(('a', 'b')),
            _ => None,
        }
    }

    /// Degrees of the primary ordering.
    pub fn degrees(self) -> [u32; 3] {
        self.orderings()[0].degrees()
    }

    /// All coefficient families entering the relations, primary first.
    pub fn families(self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for o in self.orderings() {
            for f in [o.x, o.y] {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        if self == CaseTag::CD {
            // Keep the two named families first, then the auxiliary one.
            out = vec!["C", "D", "P"];
        }
        out
    }

    /// Families whose vanishing the recursion is meant to establish.
    pub fn target_families(self) -> Vec<&'static str> {
        match self {
            CaseTag::CD => vec!["C"],
            _ => {
                let o = self.orderings()[0];
                vec![o.x, o.y]
            }
        }
    }

    /// The coupling set used to establish the vanishing.
    pub fn default_couplings(self) -> Vec<Coupling> {
        let c = |num, den| Coupling { num, den };
        match self {
            CaseTag::AB | CaseTag::EF => vec![c(1, 1), c(1, 2)],
            CaseTag::CD => vec![c(1, 1), c(2, 1), c(3, 1)],
            CaseTag::GH | CaseTag::IJ => vec![c(2, 1), c(3, 1), c(4, 1)],
        }
    }

    /// Whether the case has a symmetry identity for the coupling.
    pub fn supports(self, coupling: Coupling) -> bool {
        let Coupling { num, den } = coupling;
        match self {
            CaseTag::AB | CaseTag::EF => (num, den) == (1, 1) || (num, den) == (1, 2),
            CaseTag::CD => den == 1 && (1..=3).contains(&num),
            CaseTag::GH | CaseTag::IJ => den == 1 && num >= 2,
        }
    }

    /// Reduces a triple of expansions in the primary ordering of the case.
    pub fn reduce(
        self,
        e1: &DifferentialExpansion,
        e2: &DifferentialExpansion,
        e3: &DifferentialExpansion,
    ) -> Result<TripleSeries, DiskError> {
        let got = [e1.degree(), e2.degree(), e3.degree()];
        if got != self.degrees() {
            return Err(DiskError::DegreeMismatch(format!(
                "case {} expects degrees {:?}, got {:?}",
                self.name(),
                self.degrees(),
                got
            )));
        }
        angular_triple_reduce(e1, e2, e3)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseTag {
    type Err = DiskError;

    fn from_str(s: &str) -> Result<Self, DiskError> {
        CaseTag::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| DiskError::InvalidInput(format!("unknown case tag {s:?}")))
    }
}

/// Flow-time coupling `s = (num/den) t`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Coupling {
    pub num: u32,
    pub den: u32,
}

impl Coupling {
    pub fn new(num: u32, den: u32) -> Result<Self, DiskError> {
        if num == 0 || den == 0 {
            return Err(DiskError::InvalidInput("coupling ratio must be positive".into()));
        }
        let g = gcd(num, den);
        Ok(Self { num: num / g, den: den / g })
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.num == 1 { String::new() } else { self.num.to_string() };
        if self.den == 1 {
            write!(f, "s={num}t")
        } else {
            write!(f, "s={num}t/{}", self.den)
        }
    }
}

impl FromStr for Coupling {
    type Err = DiskError;

    /// Parses `s=t`, `s=t/2`, `s=3t`, `s=3t/2` (spaces ignored).
    fn from_str(text: &str) -> Result<Self, DiskError> {
        let bad = || DiskError::InvalidInput(format!("cannot parse coupling {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let rhs = compact.strip_prefix("s=").ok_or_else(bad)?;
        let (head, den) = match rhs.split_once('/') {
            Some((h, d)) => (h, d.parse::<u32>().map_err(|_| bad())?),
            None => (rhs, 1),
        };
        let num_text = head.strip_suffix('t').ok_or_else(bad)?;
        let num = if num_text.is_empty() { 1 } else { num_text.parse::<u32>().map_err(|_| bad())? };
        Coupling::new(num, den)
    }
}

impl TryFrom<String> for Coupling {
    type Error = DiskError;

    fn try_from(s: String) -> Result<Self, DiskError> {
        s.parse()
    }
}

impl From<Coupling> for String {
    fn from(c: Coupling) -> String {
        c.to_string()
    }
}

/// Sign convention for the IJ symmetry identity.
///
/// Shifting the base to the differential at time `t`, reflecting, and
/// exchanging `a ↔ b` gives `I(t, mt) + I(t, −(m−1)t) = 0`
/// ([`Convention::Sum`]). The variant
/// `I(t, mt) − I(t, −(m−1)t) = 0` ([`Convention::Difference`]) flips that
/// sign. Under it the relations no longer force `J`: the direction
/// `Jₙ = n + 1` satisfies every row. The other cases do not depend on the
/// choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Sum,
    Difference,
}

/// One correlation `sign · G_ordering(t·u, s·u)` in an identity, with times
/// measured in units of the base time `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Term {
    pub sign: i64,
    pub ordering: usize,
    pub t: i64,
    pub s: i64,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    label: char,
    time: i64,
}

/// Matches a configuration, rebased at `base`, to a declared ordering.
fn match_ordering(case: CaseTag, slots: &[Slot; 3], base: usize) -> Option<(usize, i64, i64)> {
    let tb = slots[base].time;
    let others: Vec<usize> = (0..3).filter(|&k| k != base).collect();
    let (i, j) = (others[0], others[1]);
    for (oi, o) in case.orderings().iter().enumerate() {
        if o.labels[0] != slots[base].label {
            continue;
        }
        if [slots[i].label, slots[j].label] == [o.labels[1], o.labels[2]] {
            return Some((oi, slots[i].time - tb, slots[j].time - tb));
        }
        if [slots[j].label, slots[i].label] == [o.labels[1], o.labels[2]] {
            return Some((oi, slots[j].time - tb, slots[i].time - tb));
        }
    }
    None
}

/// Symmetry identity `Σ termᵢ = 0` for the coupling `s = (num/den) t`.
///
/// The primary configuration has times `(0, den, num)`. It is translated so
/// the differential at the middle time sits at the base point, reflected
/// through the base point (sign `(−1)^{d₁+d₂+d₃}`, times negated), and read
/// off again in a declared ordering, exchanging labels if needed.
pub(crate) fn derive_identity(
    case: CaseTag,
    coupling: Coupling,
    convention: Convention,
) -> Result<Vec<Term>, DiskError> {
    if !case.supports(coupling) {
        return Err(DiskError::UnsupportedCoupling { case: case.name().into(), coupling: coupling.to_string() });
    }
    let primary = case.orderings()[0];
    let (t0, s0) = (coupling.den as i64, coupling.num as i64);
    let mut slots = [
        Slot { label: primary.labels[0], time: 0 },
        Slot { label: primary.labels[1], time: t0 },
        Slot { label: primary.labels[2], time: s0 },
    ];
    let mut by_time = [0usize, 1, 2];
    by_time.sort_by_key(|&k| (slots[k].time, k));
    let median = by_time[1];
    let shift = slots[median].time;
    for s in slots.iter_mut() {
        s.time = -(s.time - shift);
    }
    let total_degree: u32 = primary.degrees().iter().sum();
    let sign: i64 = if total_degree % 2 == 0 { 1 } else { -1 };

    let mut candidates: Vec<usize> = (0..3).filter(|&k| k != median).collect();
    candidates.sort_by_key(|&k| {
        let negative = (0..3).any(|j| slots[j].time - slots[k].time < 0);
        (negative, k)
    });
    candidates.insert(0, median);

    let mut found = None;
    for &base in &candidates {
        if let Some(m) = match_ordering(case, &slots, base) {
            found = Some((sign, m));
            break;
        }
        if let Some((x, y)) = case.exchange() {
            let mut swapped = slots;
            for s in swapped.iter_mut() {
                s.label = if s.label == x {
                    y
                } else if s.label == y {
                    x
                } else {
                    s.label
                };
            }
            if let Some(m) = match_ordering(case, &swapped, base) {
                found = Some((-sign, m));
                break;
            }
        }
    }
    let (mut rhs_sign, (ordering, t, s)) =
        found.ok_or_else(|| DiskError::InvalidInput("no declared ordering fits the reflected configuration".into()))?;
    if case == CaseTag::IJ && convention == Convention::Difference {
        rhs_sign = -rhs_sign;
    }
    let lhs = Term { sign: 1, ordering: 0, t: t0, s: s0 };
    if (ordering, t, s) == (0, t0, s0) {
        let combined = 1 - rhs_sign;
        if combined == 0 {
            return Err(DiskError::InvalidInput(format!("coupling {coupling} yields a trivial identity")));
        }
        return Ok(vec![Term { sign: combined, ..lhs }]);
    }
    Ok(vec![lhs, Term { sign: -rhs_sign, ordering, t, s }])
}
