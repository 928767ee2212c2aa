use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cases::{CaseTag, Convention};
use crate::relations::{rational_text, RecursionSystem};

/// Unknowns with index above `N − margin` sit next to the truncation
/// boundary and are left out of the verdict.
pub const DEFAULT_MARGIN: usize = 2;

/// Reduced row echelon form over the rationals. Returns the nonzero reduced
/// rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (k, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    row[k] -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of the null space of the reduced system, one vector per free column.
pub fn kernel_basis(reduced: &[Vec<BigRational>], pivots: &[usize], ncols: usize) -> Vec<Vec<BigRational>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in reduced.iter().zip(pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    ForcedZero,
    Undetermined,
}

/// Outcome of the rank computation for one recursion system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub case: CaseTag,
    #[serde(rename = "N")]
    pub order: usize,
    pub convention: Convention,
    pub margin: usize,
    pub verdict: VerdictKind,
    pub rank: usize,
    pub unknowns: usize,
    pub kernel_dim: usize,
    pub rows: usize,
    pub dropped_rows: usize,
    /// Target unknowns the verdict covers.
    pub tested: Vec<String>,
    /// Tested unknowns left free by the relations.
    pub not_forced: Vec<String>,
    /// Kernel vectors as sparse `(unknown, value)` lists; filled only when
    /// the verdict is undetermined.
    pub kernel_basis: Vec<Vec<(String, String)>>,
    pub warnings: Vec<String>,
}

/// Decides whether the relations force every target unknown of index at most
/// `N − margin` to vanish, that is whether each such unknown is zero on the
/// whole kernel of the relation matrix.
pub fn solve_vanishing(system: &RecursionSystem, margin: usize) -> Verdict {
    let ncols = system.unknowns.len();
    let (reduced, pivots) = rref(system.dense_rows(None), ncols);
    let kernel = kernel_basis(&reduced, &pivots, ncols);
    let targets = system.case.target_families();
    let limit = system.order.checked_sub(margin);
    let tested: Vec<usize> = (0..ncols)
        .filter(|&k| {
            let u = &system.unknowns[k];
            targets.contains(&u.family.as_str()) && limit.map_or(false, |l| u.index <= l)
        })
        .collect();
    let not_forced: Vec<usize> = tested.iter().copied().filter(|&k| kernel.iter().any(|v| !v[k].is_zero())).collect();

    let mut warnings = Vec::new();
    if system.order <= 2 * margin {
        warnings.push(format!(
            "order N = {} is within twice the boundary margin {}; only indices up to {} are tested",
            system.order,
            margin,
            limit.map_or("none".to_string(), |l| l.to_string())
        ));
    }
    if !system.dropped.is_empty() {
        warnings.push(format!("{} boundary rows touching indices above N were dropped", system.dropped.len()));
    }
    let verdict = if !tested.is_empty() && not_forced.is_empty() {
        VerdictKind::ForcedZero
    } else {
        VerdictKind::Undetermined
    };
    let kernel_basis = if verdict == VerdictKind::Undetermined {
        kernel
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (system.unknowns[k].to_string(), rational_text(c)))
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    Verdict {
        case: system.case,
        order: system.order,
        convention: system.convention,
        margin,
        verdict,
        rank: pivots.len(),
        unknowns: ncols,
        kernel_dim: kernel.len(),
        rows: system.rows.len(),
        dropped_rows: system.dropped.len(),
        tested: tested.iter().map(|&k| system.unknowns[k].to_string()).collect(),
        not_forced: not_forced.iter().map(|&k| system.unknowns[k].to_string()).collect(),
        kernel_basis,
        warnings,
    }
}
