use std::sync::Arc;

use sft::{Cylinders, DepthKFunction};

use crate::TransferError;

/// The transfer operator of a depth-`k` potential as a sparse matrix on
/// depth-`k` value vectors.
///
/// Row `u` holds the entries `e^{w(v)}` for every `k`-word `v` with
/// `σ(v)` starting with `u[..k−1]` (for `k = 1`: every symbol `v` with
/// `v → u` allowed). These are exactly the cylinder predecessors of `u`.
#[derive(Debug, Clone)]
pub struct RuelleMatrix {
    cyl: Arc<Cylinders>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl RuelleMatrix {
    /// Builds the matrix of `L_w` at the depth of `w`.
    pub fn new(w: &DepthKFunction<f64>) -> Result<Self, TransferError> {
        if !w.sft().is_mixing() {
            return Err(TransferError::NotMixing);
        }
        let cyl = Arc::clone(w.cylinders());
        let weights: Vec<f64> = w.values().iter().map(|v| v.exp()).collect();
        let rows = (0..cyl.len())
            .map(|u| cyl.predecessors(u).iter().map(|&v| (v, weights[v])).collect())
            .collect();
        Ok(RuelleMatrix { cyl, rows })
    }

    /// Builds the matrix of `L_w` after promoting `w` to `depth`.
    pub fn at_depth(w: &DepthKFunction<f64>, depth: usize) -> Result<Self, TransferError> {
        Self::new(&w.promote(depth)?)
    }

    /// The cylinders indexing rows and columns.
    pub fn cylinders(&self) -> &Arc<Cylinders> {
        &self.cyl
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Sparse row `u` as `(column, entry)` pairs.
    pub fn row(&self, u: usize) -> &[(usize, f64)] {
        &self.rows[u]
    }

    /// `L f` for a value vector `f`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(v, e)| e * f[v]).sum())
            .collect()
    }

    /// `Lᵀ g`, the action on cylinder measures.
    pub fn apply_transpose(&self, g: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (u, r) in self.rows.iter().enumerate() {
            for &(v, e) in r {
                out[v] += e * g[u];
            }
        }
        out
    }

    /// `L f` for a depth-`k` function on the same cylinders.
    pub fn apply_fn(&self, f: &DepthKFunction<f64>) -> Result<DepthKFunction<f64>, TransferError> {
        let f = f.promote_to(&self.cyl)?;
        Ok(DepthKFunction::new(Arc::clone(&self.cyl), self.apply(f.values()))?)
    }

    /// Row sums, i.e. `L 1`.
    pub fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(_, e)| e).sum()).collect()
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (u, r) in self.rows.iter().enumerate() {
            for &(v, e) in r {
                m[u][v] = e;
            }
        }
        m
    }
}
