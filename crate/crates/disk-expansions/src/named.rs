use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cases::{CaseTag, Convention, Coupling};
use crate::error::DiskError;
use crate::relations::{build_relations, RecursionSystem, Unknown};

/// A closed-form relation expected among the rows generated by one coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedRelation {
    pub label: String,
    pub case: CaseTag,
    pub coupling: Coupling,
    pub convention: Convention,
    pub coeffs: Vec<(Unknown, BigRational)>,
}

/// Whether a named relation lies in the span of its coupling's rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub label: String,
    pub coupling: Coupling,
    pub convention: Convention,
    pub matched: bool,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        int(1 << e)
    } else {
        int(1) / int(1 << (-e))
    }
}

/// The closed-form relations of a case up to order `N`, on the default
/// coupling set.
pub fn named_relations(case: CaseTag, order: usize) -> Vec<NamedRelation> {
    let mut out = Vec::new();
    let mut push = |label: String, coupling: Coupling, convention: Convention, coeffs: Vec<(&str, usize, BigRational)>| {
        out.push(NamedRelation {
            label,
            case,
            coupling,
            convention,
            coeffs: coeffs.into_iter().map(|(f, n, c)| (Unknown::new(f, n), c)).collect(),
        })
    };
    let fp = Convention::Sum;
    let c = |num, den| Coupling { num, den };
    match case {
        CaseTag::AB => {
            push("A0 + 2B0 = 0".into(), c(1, 1), fp, vec![("A", 0, int(1)), ("B", 0, int(2))]);
            for n in 0..=order as i64 {
                let mut coeffs = vec![("B", n as usize, pow2(n + 3))];
                for k in 0..=n {
                    coeffs.push(("A", k as usize, int((n - k + 1) * (n - k + 2)) * pow2(k - 1)));
                }
                push(format!("2^(n+3) B_n + Σ_k (n−k+1)(n−k+2) 2^(k−1) A_k = 0, n = {n}"), c(1, 2), fp, coeffs);
            }
        }
        CaseTag::CD => {
            push("C0 = 0".into(), c(1, 1), fp, vec![("C", 0, int(1))]);
            push("2C1 − 8C0 = D0".into(), c(1, 1), fp, vec![("C", 1, int(2)), ("C", 0, int(-8)), ("D", 0, int(-1))]);
        }
        CaseTag::EF => {
            push("E0 = 0".into(), c(1, 1), fp, vec![("E", 0, int(1))]);
            push("E1 = −2F0".into(), c(1, 1), fp, vec![("E", 1, int(1)), ("F", 0, int(2))]);
            push("E0 = 0".into(), c(1, 2), fp, vec![("E", 0, int(1))]);
            for n in 1..=order as i64 {
                let mut coeffs = vec![("F", (n - 1) as usize, pow2(n + 2))];
                for k in 0..=n {
                    coeffs.push(("E", k as usize, pow2(k) * int(n - k + 1)));
                }
                push(format!("Σ_k 2^k (n−k+1) E_k + 2^(n+2) F_(n−1) = 0, n = {n}"), c(1, 2), fp, coeffs);
            }
        }
        CaseTag::GH => {
            for m in 2..=4i64 {
                let cm = c(m as u32, 1);
                push(format!("G0 = 0, m = {m}"), cm, fp, vec![("G", 0, int(1))]);
                push(format!("(m² − (m−1)²) G1 = 0, m = {m}"), cm, fp, vec![("G", 1, int(m * m - (m - 1) * (m - 1)))]);
                push(
                    format!("(m³ + (m−1)³) G2 = −(2m−1) H1 + (6m−3) H0, m = {m}"),
                    cm,
                    fp,
                    vec![
                        ("G", 2, int(m.pow(3) + (m - 1).pow(3))),
                        ("H", 1, int(2 * m - 1)),
                        ("H", 0, int(-(6 * m - 3))),
                    ],
                );
            }
        }
        CaseTag::IJ => {
            for m in 2..=4i64 {
                push(
                    format!("(m⁴ − (m−1)⁴) I0 = −(2m−1) J1 + (4m−2) J0, m = {m}"),
                    c(m as u32, 1),
                    Convention::Difference,
                    vec![
                        ("I", 0, int(m.pow(4) - (m - 1).pow(4))),
                        ("J", 1, int(2 * m - 1)),
                        ("J", 0, int(-(4 * m - 2))),
                    ],
                );
            }
        }
    }
    out
}

/// Builds the default-coupling system of `case` under each convention the
/// named relations need and checks every relation against its coupling.
pub fn check_named_relations(case: CaseTag, order: usize) -> Result<Vec<NamedCheck>, DiskError> {
    let mut systems: Vec<RecursionSystem> = Vec::new();
    let mut out = Vec::new();
    for rel in named_relations(case, order) {
        let idx = match systems.iter().position(|s| s.convention == rel.convention) {
            Some(i) => i,
            None => {
                systems.push(build_relations(case, order, &case.default_couplings(), rel.convention)?);
                systems.len() - 1
            }
        };
        let matched = systems[idx].contains(Some(rel.coupling), &rel.coeffs);
        out.push(NamedCheck { label: rel.label, coupling: rel.coupling, convention: rel.convention, matched });
    }
    Ok(out)
}
