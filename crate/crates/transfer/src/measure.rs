use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use sft::{Cylinders, DepthKFunction, SftError};

use crate::{rpf, TransferError, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// A shift-invariant Markov measure given by its cylinder masses on
/// admissible `d`-words.
///
/// The measure is treated as a Markov chain with memory `d − 1`: masses of
/// longer cylinders are obtained from the conditional probabilities
/// `m(u b) = m(u) · m(σ(u) b) / m(σ(u))`. Equilibrium measures of depth-`k`
/// potentials are stored at depth `max(k, 2)`, which is enough for this
/// extension to be exact.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    cyl: Arc<Cylinders>,
    weights: Vec<f64>,
}

impl Serialize for MarkovMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MarkovMeasure", 2)?;
        st.serialize_field("depth", &self.depth())?;
        st.serialize_field("weights", &self.table())?;
        st.end()
    }
}

impl MarkovMeasure {
    /// Wraps nonnegative cylinder masses, normalizing them to sum to 1.
    pub fn new(cyl: Arc<Cylinders>, weights: Vec<f64>) -> Result<Self, TransferError> {
        if weights.len() != cyl.len() {
            return Err(SftError::TableMismatch(format!(
                "{} weights for {} words",
                weights.len(),
                cyl.len()
            ))
            .into());
        }
        let total: f64 = weights.iter().sum();
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(MarkovMeasure { cyl, weights })
    }

    /// Word length `d` of the stored masses.
    pub fn depth(&self) -> usize {
        self.cyl.depth()
    }

    /// The cylinders carrying the masses.
    pub fn cylinders(&self) -> &Arc<Cylinders> {
        &self.cyl
    }

    /// Cylinder masses in cylinder order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `word → mass` table.
    pub fn table(&self) -> BTreeMap<String, f64> {
        DepthKFunction::new(Arc::clone(&self.cyl), self.weights.clone())
            .expect("weights match cylinders")
            .to_table()
    }

    /// Masses of the cylinders of length `j ≤ d`.
    pub fn marginal(&self, j: usize) -> Result<MarkovMeasure, TransferError> {
        if j > self.depth() || j == 0 {
            return Err(SftError::DepthMismatch(format!(
                "marginal of depth {j} from a measure of depth {}",
                self.depth()
            ))
            .into());
        }
        if j == self.depth() {
            return Ok(self.clone());
        }
        let target = Arc::new(Cylinders::new(self.cyl.sft(), j)?);
        let mut w = vec![0.0; target.len()];
        for (i, word) in self.cyl.words().enumerate() {
            w[target.index_of(&word[..j]).expect("prefix is admissible")] += self.weights[i];
        }
        Ok(MarkovMeasure {
            cyl: target,
            weights: w,
        })
    }

    /// Masses of the cylinders of length `j ≥ d`, via the Markov property.
    pub fn extend(&self, j: usize) -> Result<MarkovMeasure, TransferError> {
        if j <= self.depth() {
            return self.marginal(j);
        }
        let d = self.depth();
        // Mass of each (d−1)-word, the conditioning context.
        let context = self.marginal_map(d - 1);
        let target = Arc::new(Cylinders::new(self.cyl.sft(), j)?);
        let weights = target
            .words()
            .map(|word| {
                let mut m = self.weights[self.cyl.index_of(&word[..d]).expect("admissible")];
                for start in 1..=(j - d) {
                    let block = &word[start..start + d];
                    let num = self.weights[self.cyl.index_of(block).expect("admissible")];
                    let den = context(&block[..d - 1]);
                    m = if den > 0.0 { m * num / den } else { 0.0 };
                }
                m
            })
            .collect();
        Ok(MarkovMeasure {
            cyl: target,
            weights,
        })
    }

    /// Mass of `(d−1)`-prefix cylinders as a lookup closure.
    fn marginal_map(&self, j: usize) -> impl Fn(&[usize]) -> f64 + '_ {
        let mut map: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (i, word) in self.cyl.words().enumerate() {
            *map.entry(word[..j].to_vec()).or_insert(0.0) += self.weights[i];
        }
        move |w: &[usize]| map.get(w).copied().unwrap_or(0.0)
    }

    /// `∫ f dm` for a function of any depth.
    pub fn integrate(&self, f: &DepthKFunction<f64>) -> Result<f64, TransferError> {
        if f.sft() != self.cyl.sft() {
            return Err(SftError::DepthMismatch("function on a different shift".into()).into());
        }
        if f.depth() > self.depth() {
            return self.extend(f.depth())?.integrate(f);
        }
        let g = f.promote_to(&self.cyl)?;
        Ok(g.values().iter().zip(&self.weights).map(|(a, b)| a * b).sum())
    }

    /// Largest violation of shift invariance:
    /// `max_u |Σ_a m(a u) − Σ_b m(u b)|` over `(d−1)`-words `u`.
    pub fn invariance_defect(&self) -> f64 {
        let d = self.depth();
        if d < 2 {
            return 0.0;
        }
        let mut left: BTreeMap<&[usize], f64> = BTreeMap::new();
        let mut right: BTreeMap<&[usize], f64> = BTreeMap::new();
        for (i, w) in self.cyl.words().enumerate() {
            *left.entry(&w[1..]).or_insert(0.0) += self.weights[i];
            *right.entry(&w[..d - 1]).or_insert(0.0) += self.weights[i];
        }
        right
            .iter()
            .map(|(u, r)| (r - left.get(u).copied().unwrap_or(0.0)).abs())
            .chain(left.iter().map(|(u, l)| (l - right.get(u).copied().unwrap_or(0.0)).abs()))
            .fold(0.0, f64::max)
    }

    /// Kolmogorov–Sinai entropy of the Markov chain with memory `d − 1`:
    /// `−Σ_u m(u) log(m(u) / m(u[..d−1]))`.
    ///
    /// A depth-1 measure is read as a Bernoulli measure.
    pub fn entropy(&self) -> f64 {
        let d = self.depth();
        if d == 1 {
            return -self
                .weights
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|p| p * p.ln())
                .sum::<f64>();
        }
        let ctx = self.marginal_map(d - 1);
        self.cyl
            .words()
            .zip(&self.weights)
            .filter(|(_, &m)| m > 0.0)
            .map(|(w, &m)| -m * (m / ctx(&w[..d - 1])).ln())
            .sum()
    }
}

/// The equilibrium measure of `w`, with cylinder masses `h(u) μ(u)` at depth
/// `max(k, 2)`.
pub fn equilibrium_measure(w: &DepthKFunction<f64>) -> Result<MarkovMeasure, TransferError> {
    let w = if w.depth() < 2 { w.promote(2)? } else { w.clone() };
    let data = rpf(&w, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let weights = data
        .eigenfunction
        .values()
        .iter()
        .zip(&data.adjoint_measure)
        .map(|(h, m)| h * m)
        .collect();
    MarkovMeasure::new(Arc::clone(w.cylinders()), weights)
}
