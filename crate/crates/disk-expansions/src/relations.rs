use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cases::{derive_identity, CaseTag, Convention, Coupling, Term};
use crate::error::DiskError;
use crate::series::PowerSeries;

/// Extra series order generated beyond `2N` so that every relation touching
/// an index `≤ N` is computed exactly before truncation.
const EXTRA_ORDER: usize = 8;

/// One unknown coefficient, such as `A3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unknown {
    pub family: String,
    pub index: usize,
}

impl Unknown {
    pub fn new(family: &str, index: usize) -> Self {
        Self { family: family.to_string(), index }
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.index)
    }
}

/// Linear relation `Σ coeff · unknown = 0`, the coefficient of `Uᵖ` in the
/// series expansion of a symmetry identity, where `U = tanh u` and the flow
/// times are integer multiples of `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub coupling: Coupling,
    pub power: usize,
    /// Sparse row as (column, coefficient), sorted by column.
    pub coeffs: Vec<(usize, BigRational)>,
}

/// Relation rows over the unknowns `family_n`, `0 ≤ n ≤ N`, of one case.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionSystem {
    pub case: CaseTag,
    pub order: usize,
    pub convention: Convention,
    pub couplings: Vec<Coupling>,
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Relation>,
    /// Series powers whose relation involves an index beyond `N`; these are
    /// not part of the system.
    pub dropped: Vec<(Coupling, usize)>,
}

/// Generates the relation rows of `case` to order `N` from each coupling's
/// symmetry identity, matching powers of `U` exactly.
pub fn build_relations(
    case: CaseTag,
    order: usize,
    couplings: &[Coupling],
    convention: Convention,
) -> Result<RecursionSystem, DiskError> {
    if order < 2 {
        return Err(DiskError::InvalidInput(format!("order must be at least 2, got {order}")));
    }
    if couplings.is_empty() {
        return Err(DiskError::InvalidInput("at least one coupling is required".into()));
    }
    let families = case.families();
    let unknowns: Vec<Unknown> =
        families.iter().flat_map(|f| (0..=order).map(move |n| Unknown::new(f, n))).collect();
    let p_max = 2 * order + EXTRA_ORDER;
    let n_ext = p_max / 2 + 1;
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    let mut seen = Vec::new();
    for &coupling in couplings {
        if seen.contains(&coupling) {
            continue;
        }
        seen.push(coupling);
        let terms = derive_identity(case, coupling, convention)?;
        // table[family][index] is the series multiplying that unknown.
        let mut table = vec![vec![PowerSeries::zero(p_max); n_ext + 1]; families.len()];
        for term in &terms {
            accumulate_term(case, term, p_max, n_ext, &families, &mut table);
        }
        for p in 0..=p_max {
            let mut coeffs = Vec::new();
            let mut beyond = false;
            for (fi, per_index) in table.iter().enumerate() {
                for (n, series) in per_index.iter().enumerate() {
                    let c = series.coeff(p);
                    if c.is_zero() {
                        continue;
                    }
                    if n > order {
                        beyond = true;
                    } else {
                        coeffs.push((fi * (order + 1) + n, c.clone()));
                    }
                }
            }
            if beyond {
                dropped.push((coupling, p));
            } else if !coeffs.is_empty() {
                coeffs.sort_by_key(|(k, _)| *k);
                rows.push(Relation { coupling, power: p, coeffs });
            }
        }
    }
    Ok(RecursionSystem { case, order, convention, couplings: seen, unknowns, rows, dropped })
}

/// Adds `sign · G_ordering(t u, s u)` (without the constant ¼) to the table.
fn accumulate_term(
    case: CaseTag,
    term: &Term,
    p_max: usize,
    n_ext: usize,
    families: &[&str],
    table: &mut [Vec<PowerSeries>],
) {
    let o = case.orderings()[term.ordering];
    let [_, d2, d3] = o.degrees();
    let (k1, k2) = o.offsets();
    let big_t = PowerSeries::tanh_multiple(term.t.unsigned_abs() as u32, p_max);
    let big_s = PowerSeries::tanh_multiple(term.s.unsigned_abs() as u32, p_max);
    let one = PowerSeries::one(p_max);
    let pre = one
        .sub(&big_t.mul(&big_t))
        .pow(d2 as usize)
        .mul(&one.sub(&big_s.mul(&big_s)).pow(d3 as usize))
        .scale(&BigRational::from_integer(term.sign.into()));
    let ts = big_t.mul(&big_s);
    let parity = |negative: bool, p: usize| if negative && p % 2 == 1 { -1 } else { 1 };
    let (tn, sn) = (term.t < 0, term.s < 0);
    let fx = families.iter().position(|f| *f == o.x).expect("declared family");
    let fy = families.iter().position(|f| *f == o.y).expect("declared family");

    let mut q = pre.mul(&big_s.pow(k1));
    for n in 0..=n_ext {
        if q.valuation().is_none() {
            break;
        }
        let sg = parity(tn, n) * parity(sn, n + k1);
        add_signed(&mut table[fx][n], &q, sg);
        q = q.mul(&ts);
    }
    let mut q = pre.mul(&big_t.pow(k2));
    for m in 0..=n_ext {
        if q.valuation().is_none() {
            break;
        }
        let sg = parity(tn, m + k2) * parity(sn, m);
        add_signed(&mut table[fy][m], &q, sg);
        q = q.mul(&ts);
    }
}

fn add_signed(target: &mut PowerSeries, q: &PowerSeries, sign: i64) {
    *target = if sign > 0 { target.add(q) } else { target.sub(q) };
}

impl RecursionSystem {
    /// Column of an unknown, if it belongs to the system.
    pub fn column(&self, unknown: &Unknown) -> Option<usize> {
        self.unknowns.iter().position(|u| u == unknown)
    }

    /// Dense rows, optionally restricted to one coupling.
    pub fn dense_rows(&self, coupling: Option<Coupling>) -> Vec<Vec<BigRational>> {
        self.rows
            .iter()
            .filter(|r| coupling.map_or(true, |c| r.coupling == c))
            .map(|r| {
                let mut row = vec![BigRational::zero(); self.unknowns.len()];
                for (k, c) in &r.coeffs {
                    row[*k] = c.clone();
                }
                row
            })
            .collect()
    }

    /// Whether `Σ coeff · unknown = 0` lies in the rational span of the rows
    /// generated by `coupling` (or by all couplings when `None`). Scaling a
    /// row or combining rows does not change membership.
    pub fn contains(&self, coupling: Option<Coupling>, relation: &[(Unknown, BigRational)]) -> bool {
        let mut target = vec![BigRational::zero(); self.unknowns.len()];
        for (u, c) in relation {
            match self.column(u) {
                Some(k) => target[k] += c,
                None => return false,
            }
        }
        let (reduced, pivots) = crate::solve::rref(self.dense_rows(coupling), self.unknowns.len());
        for (r, &pc) in pivots.iter().enumerate() {
            if target[pc].is_zero() {
                continue;
            }
            let f = target[pc].clone();
            for (k, v) in reduced[r].iter().enumerate() {
                if !v.is_zero() {
                    target[k] -= &f * v;
                }
            }
        }
        target.iter().all(Zero::is_zero)
    }

    /// Serializable view with rational coefficients written as `p/q`.
    pub fn dump(&self) -> SystemDump {
        SystemDump {
            case: self.case,
            order: self.order,
            convention: self.convention,
            couplings: self.couplings.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| RowDump {
                    coupling: r.coupling,
                    powers: r.power,
                    coeffs: r.coeffs.iter().map(|(k, c)| (self.unknowns[*k].to_string(), rational_text(c))).collect(),
                })
                .collect(),
            dropped_rows: self.dropped.len(),
        }
    }
}

/// Writes a rational as `p` or `p/q`.
pub fn rational_text(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// JSON shape of a relation dump: `{case, N, rows: [{coupling, powers, coeffs}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDump {
    pub case: CaseTag,
    #[serde(rename = "N")]
    pub order: usize,
    pub convention: Convention,
    pub couplings: Vec<Coupling>,
    pub rows: Vec<RowDump>,
    pub dropped_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDump {
    pub coupling: Coupling,
    /// Exponent of `U` whose coefficient gives the row.
    pub powers: usize,
    /// `(unknown, coefficient)` pairs in column order.
    pub coeffs: Vec<(String, String)>,
}
