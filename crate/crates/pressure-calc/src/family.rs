use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use sft::{Cylinders, DepthKFunction, Sft, SftError};

use crate::PressureError;

/// A parameter multi-index: the sorted list of parameter positions being
/// differentiated, e.g. `[0, 0, 1]` for `∂²/∂u₀² ∂/∂u₁`.
pub type MultiIndex = Vec<usize>;

type Evaluator = dyn Fn(&[f64]) -> DepthKFunction<f64> + Send + Sync;

/// Central-difference step per derivative order for partials that are not
/// supplied in closed form.
const PARTIAL_STEPS: [f64; 3] = [1e-3, 2e-3, 1e-2];
/// Five-point first-derivative stencil `(offsets, weights)`, error `O(h⁴)`.
const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];

/// A smooth family `u ↦ F(u)` of depth-`k` potentials depending on one to
/// three real parameters, with optional closed-form partials at `u = 0`.
///
/// Partials without a closed form are obtained by nested five-point central
/// differences of the evaluator.
#[derive(Clone)]
pub struct PotentialFamily {
    params: usize,
    cyl: Arc<Cylinders>,
    eval: Arc<Evaluator>,
    partials: BTreeMap<MultiIndex, DepthKFunction<f64>>,
}

impl fmt::Debug for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialFamily")
            .field("params", &self.params)
            .field("depth", &self.cyl.depth())
            .field("closed_form_partials", &self.partials.keys().collect::<Vec<_>>())
            .finish()
    }
}

fn normalize_index(params: usize, index: &[usize]) -> Result<MultiIndex, PressureError> {
    if index.is_empty() || index.len() > 3 || index.iter().any(|&i| i >= params) {
        return Err(PressureError::UnsupportedDerivative(format!(
            "multi-index {index:?} for a {params}-parameter family"
        )));
    }
    let mut v = index.to_vec();
    v.sort_unstable();
    Ok(v)
}

impl PotentialFamily {
    /// Wraps an evaluator. The depth of `F(0)` fixes the depth of the family.
    pub fn new(
        params: usize,
        eval: impl Fn(&[f64]) -> DepthKFunction<f64> + Send + Sync + 'static,
    ) -> Result<Self, PressureError> {
        if !(1..=3).contains(&params) {
            return Err(PressureError::ParameterCount {
                expected: 3,
                found: params,
            });
        }
        let base = eval(&vec![0.0; params]);
        Ok(PotentialFamily {
            params,
            cyl: Arc::clone(base.cylinders()),
            eval: Arc::new(eval),
            partials: BTreeMap::new(),
        })
    }

    /// Records the closed form of the partial `∂_index F(0)`.
    pub fn with_partial(
        mut self,
        index: &[usize],
        partial: DepthKFunction<f64>,
    ) -> Result<Self, PressureError> {
        let key = normalize_index(self.params, index)?;
        let partial = partial.promote_to(&self.cyl)?;
        self.partials.insert(key, partial);
        Ok(self)
    }

    /// Number of parameters.
    pub fn params(&self) -> usize {
        self.params
    }

    /// Depth of every member of the family.
    pub fn depth(&self) -> usize {
        self.cyl.depth()
    }

    /// The underlying shift.
    pub fn sft(&self) -> &Sft {
        self.cyl.sft()
    }

    /// `F(point)`, checked to have the family's depth.
    pub fn eval(&self, point: &[f64]) -> Result<DepthKFunction<f64>, PressureError> {
        if point.len() != self.params {
            return Err(PressureError::ParameterCount {
                expected: self.params,
                found: point.len(),
            });
        }
        let f = (self.eval)(point);
        if !f.cylinders().same_as(&self.cyl) {
            return Err(SftError::DepthMismatch(format!(
                "family member of depth {} in a family of depth {}",
                f.depth(),
                self.depth()
            ))
            .into());
        }
        Ok(f)
    }

    /// `F(0)`.
    pub fn base(&self) -> Result<DepthKFunction<f64>, PressureError> {
        self.eval(&vec![0.0; self.params])
    }

    /// Whether `∂_index F(0)` has a closed form.
    pub fn has_closed_form(&self, index: &[usize]) -> bool {
        normalize_index(self.params, index)
            .map(|k| self.partials.contains_key(&k))
            .unwrap_or(false)
    }

    /// `∂_index F(0)`: the closed form when supplied, otherwise nested
    /// central differences.
    pub fn partial(&self, index: &[usize]) -> Result<DepthKFunction<f64>, PressureError> {
        let key = normalize_index(self.params, index)?;
        match self.partials.get(&key) {
            Some(p) => Ok(p.clone()),
            None => self.partial_fd(&key),
        }
    }

    /// `∂_index F(0)` by nested five-point central differences, ignoring any
    /// closed form.
    pub fn partial_fd(&self, index: &[usize]) -> Result<DepthKFunction<f64>, PressureError> {
        let key = normalize_index(self.params, index)?;
        let h = PARTIAL_STEPS[key.len() - 1];
        let mut acc = vec![0.0; self.cyl.len()];
        let mut point = vec![0.0; self.params];
        self.nested(&key, h, 1.0, &mut point, &mut acc)?;
        Ok(DepthKFunction::new(Arc::clone(&self.cyl), acc)?)
    }

    fn nested(
        &self,
        index: &[usize],
        h: f64,
        weight: f64,
        point: &mut Vec<f64>,
        acc: &mut [f64],
    ) -> Result<(), PressureError> {
        match index.split_first() {
            None => {
                let f = self.eval(point)?;
                for (a, v) in acc.iter_mut().zip(f.values()) {
                    *a += weight * v;
                }
                Ok(())
            }
            Some((&i, rest)) => {
                for &(off, w) in &STENCIL {
                    point[i] += off * h;
                    self.nested(rest, h, weight * w / h, point, acc)?;
                    point[i] -= off * h;
                }
                Ok(())
            }
        }
    }

    /// Largest sup-norm discrepancy between supplied closed-form partials and
    /// their finite-difference counterparts.
    pub fn closed_form_discrepancy(&self) -> Result<f64, PressureError> {
        let mut worst = 0.0f64;
        for (key, p) in &self.partials {
            let fd = self.partial_fd(key)?;
            worst = worst.max(p.try_sub(&fd)?.sup_norm());
        }
        Ok(worst)
    }

    /// The one-parameter family `s ↦ F(s · direction)`.
    pub fn restrict(&self, direction: &[f64]) -> Result<PotentialFamily, PressureError> {
        if direction.len() != self.params {
            return Err(PressureError::ParameterCount {
                expected: self.params,
                found: direction.len(),
            });
        }
        let dir = direction.to_vec();
        let parent = self.clone();
        PotentialFamily::new(1, move |s| {
            let point: Vec<f64> = dir.iter().map(|d| d * s[0]).collect();
            (parent.eval)(&point)
        })
    }

    /// The same family with a constant added to every member.
    pub fn shifted(&self, c: f64) -> PotentialFamily {
        let parent = Arc::clone(&self.eval);
        PotentialFamily {
            params: self.params,
            cyl: Arc::clone(&self.cyl),
            eval: Arc::new(move |u| parent(u).add_constant(c)),
            partials: self.partials.clone(),
        }
    }
}

/// A family that is polynomial in its parameters:
///
/// ```text
/// F(u) = f₀ + Σ_α  (Π_i u_iᵏⁱ / kᵢ!) · g_α
/// ```
///
/// where `α` runs over multi-indices of order 1 to 3 and `kᵢ` counts the
/// occurrences of parameter `i` in `α`. Then `∂_α F(0) = g_α` exactly, and
/// partials at any point are available in closed form.
#[derive(Debug, Clone)]
pub struct PolynomialFamily {
    params: usize,
    base: DepthKFunction<f64>,
    terms: BTreeMap<MultiIndex, DepthKFunction<f64>>,
}

fn counts(params: usize, index: &[usize]) -> Vec<usize> {
    let mut c = vec![0; params];
    for &i in index {
        c[i] += 1;
    }
    c
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl PolynomialFamily {
    /// The constant family `F(u) = f₀`.
    pub fn new(params: usize, base: DepthKFunction<f64>) -> Result<Self, PressureError> {
        if !(1..=3).contains(&params) {
            return Err(PressureError::ParameterCount {
                expected: 3,
                found: params,
            });
        }
        Ok(PolynomialFamily {
            params,
            base,
            terms: BTreeMap::new(),
        })
    }

    /// Adds `g` as the coefficient `∂_index F(0)`, replacing any previous
    /// coefficient. All members are kept at the largest depth seen.
    pub fn with_term(mut self, index: &[usize], g: DepthKFunction<f64>) -> Result<Self, PressureError> {
        let key = normalize_index(self.params, index)?;
        if g.sft() != self.base.sft() {
            return Err(SftError::DepthMismatch("term on a different shift".into()).into());
        }
        let depth = g.depth().max(self.base.depth());
        self.base = self.base.promote(depth)?;
        for t in self.terms.values_mut() {
            *t = t.promote(depth)?;
        }
        self.terms.insert(key, g.promote(depth)?);
        Ok(self)
    }

    /// Number of parameters.
    pub fn params(&self) -> usize {
        self.params
    }

    /// `F(0)`.
    pub fn base(&self) -> &DepthKFunction<f64> {
        &self.base
    }

    /// The coefficient `∂_index F(0)`, if present.
    pub fn term(&self, index: &[usize]) -> Option<&DepthKFunction<f64>> {
        let mut key = index.to_vec();
        key.sort_unstable();
        self.terms.get(&key)
    }

    /// `F(point)`.
    pub fn eval(&self, point: &[f64]) -> DepthKFunction<f64> {
        self.partial_at(&[], point)
    }

    /// `∂_index F(point)`; the empty index gives `F(point)`.
    pub fn partial_at(&self, index: &[usize], point: &[f64]) -> DepthKFunction<f64> {
        let want = counts(self.params, index);
        let mut values = if index.is_empty() {
            self.base.values().to_vec()
        } else {
            vec![0.0; self.base.cylinders().len()]
        };
        for (key, g) in &self.terms {
            let have = counts(self.params, key);
            if have.iter().zip(&want).any(|(h, w)| h < w) {
                continue;
            }
            let coeff: f64 = have
                .iter()
                .zip(&want)
                .zip(point)
                .map(|((&h, &w), &u)| u.powi((h - w) as i32) / factorial(h - w))
                .product();
            if coeff != 0.0 {
                for (v, x) in values.iter_mut().zip(g.values()) {
                    *v += coeff * x;
                }
            }
        }
        DepthKFunction::new(Arc::clone(self.base.cylinders()), values).expect("shared cylinders")
    }

    /// The family as a [`PotentialFamily`] with every partial at `0` in
    /// closed form (absent coefficients are zero).
    pub fn to_family(&self) -> Result<PotentialFamily, PressureError> {
        let me = self.clone();
        let mut fam = PotentialFamily::new(self.params, move |u| me.eval(u))?;
        for index in all_indices(self.params) {
            let p = self.partial_at(&index, &vec![0.0; self.params]);
            fam = fam.with_partial(&index, p)?;
        }
        Ok(fam)
    }
}

/// All sorted multi-indices of order 1 to 3 over `params` parameters.
fn all_indices(params: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for a in 0..params {
        out.push(vec![a]);
        for b in a..params {
            out.push(vec![a, b]);
            for c in b..params {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on(s: &Sft, k: usize, f: impl Fn(&[usize]) -> f64) -> DepthKFunction<f64> {
        DepthKFunction::on(s, k, f).unwrap()
    }

    #[test]
    fn polynomial_partials_are_exact() {
        let s = Sft::full_shift(2).unwrap();
        let poly = PolynomialFamily::new(2, on(&s, 1, |u| u[0] as f64))
            .unwrap()
            .with_term(&[0], on(&s, 1, |_| 1.0))
            .unwrap()
            .with_term(&[1, 0], on(&s, 2, |u| u[1] as f64))
            .unwrap()
            .with_term(&[0, 0, 1], on(&s, 1, |_| 6.0))
            .unwrap();
        // F(u, v) = x₀ + u + u v x₁ + 3 u² v.
        let f = poly.eval(&[0.5, 2.0]);
        assert!((f.eval(&[1, 1]).unwrap() - (1.0 + 0.5 + 1.0 + 1.5)).abs() < 1e-15);
        let du = poly.partial_at(&[0], &[0.5, 2.0]);
        assert!((du.eval(&[0, 1]).unwrap() - (1.0 + 2.0 + 6.0)).abs() < 1e-15);
        let fam = poly.to_family().unwrap();
        assert!(fam.closed_form_discrepancy().unwrap() < 1e-8);
        assert_eq!(fam.partial(&[1, 1]).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn finite_difference_partials_of_an_analytic_family() {
        let s = Sft::full_shift(2).unwrap();
        let fam = PotentialFamily::new(1, move |u| {
            DepthKFunction::on(&s, 1, |w| (u[0] * (1.0 + w[0] as f64)).sin()).unwrap()
        })
        .unwrap();
        // ∂ˢ sin(c s) at 0 = c, 0, −c³.
        let d1 = fam.partial(&[0]).unwrap();
        let d2 = fam.partial(&[0, 0]).unwrap();
        let d3 = fam.partial(&[0, 0, 0]).unwrap();
        assert!((d1.eval(&[1]).unwrap() - 2.0).abs() < 1e-10);
        assert!(d2.sup_norm() < 1e-9);
        assert!((d3.eval(&[1]).unwrap() + 8.0).abs() < 1e-6);
    }

    #[test]
    fn bad_indices_are_rejected() {
        let s = Sft::full_shift(2).unwrap();
        let fam = PolynomialFamily::new(1, on(&s, 1, |_| 0.0)).unwrap().to_family().unwrap();
        assert!(fam.partial(&[1]).is_err());
        assert!(fam.partial(&[0, 0, 0, 0]).is_err());
        assert!(PotentialFamily::new(4, |_| unreachable!()).is_err());
    }

    #[test]
    fn restriction_and_shift() {
        let s = Sft::full_shift(2).unwrap();
        let poly = PolynomialFamily::new(2, on(&s, 1, |_| 0.0))
            .unwrap()
            .with_term(&[0], on(&s, 1, |_| 1.0))
            .unwrap()
            .with_term(&[1], on(&s, 1, |_| 3.0))
            .unwrap();
        let line = poly.to_family().unwrap().restrict(&[1.0, 1.0]).unwrap();
        assert!((line.partial(&[0]).unwrap().eval(&[0]).unwrap() - 4.0).abs() < 1e-10);
        let up = line.shifted(2.0);
        assert!((up.base().unwrap().eval(&[1]).unwrap() - 2.0).abs() < 1e-15);
    }
}
