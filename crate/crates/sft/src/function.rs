use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::{Cylinders, Sft, SftError, Word};

/// Numeric types a [`DepthKFunction`] can take values in (`f64`, complex).
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
}

impl<T> Scalar for T where
    T: Copy
        + Debug
        + PartialEq
        + Send
        + Sync
        + 'static
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Zero
        + One
{
}

/// A function on the shift space that depends only on the first `k`
/// symbols.
///
/// Values are stored in the lexicographic order of the admissible `k`-words
/// of the shared [`Cylinders`]. Binary operations between functions of
/// different depth promote the shallower one to the deeper depth.
#[derive(Debug, Clone)]
pub struct DepthKFunction<T = f64> {
    cyl: Arc<Cylinders>,
    values: Vec<T>,
}

impl<T: Scalar> DepthKFunction<T> {
    /// Wraps a value table; its length must equal the number of cylinders.
    pub fn new(cyl: Arc<Cylinders>, values: Vec<T>) -> Result<Self, SftError> {
        if values.len() != cyl.len() {
            return Err(SftError::TableMismatch(format!(
                "{} values for {} words of depth {}",
                values.len(),
                cyl.len(),
                cyl.depth()
            )));
        }
        Ok(DepthKFunction { cyl, values })
    }

    /// Tabulates `f` on every admissible `k`-word.
    pub fn from_fn(cyl: Arc<Cylinders>, f: impl Fn(&[usize]) -> T) -> Self {
        let values = cyl.words().map(f).collect();
        DepthKFunction { cyl, values }
    }

    /// Tabulates `f` on the admissible `k`-words of `sft`.
    pub fn on(sft: &Sft, k: usize, f: impl Fn(&[usize]) -> T) -> Result<Self, SftError> {
        Ok(Self::from_fn(Arc::new(Cylinders::new(sft, k)?), f))
    }

    /// The constant function `c` at the depth of `cyl`.
    pub fn constant(cyl: Arc<Cylinders>, c: T) -> Self {
        let values = vec![c; cyl.len()];
        DepthKFunction { cyl, values }
    }

    /// The indicator of sequences starting with `symbol`.
    pub fn indicator(cyl: Arc<Cylinders>, symbol: usize) -> Self {
        Self::from_fn(cyl, |w| if w[0] == symbol { T::one() } else { T::zero() })
    }

    /// Builds a function from a `word → value` table; the keys must be
    /// exactly the admissible `k`-words.
    pub fn from_table(
        sft: &Sft,
        k: usize,
        table: &BTreeMap<String, T>,
    ) -> Result<Self, SftError> {
        let cyl = Arc::new(Cylinders::new(sft, k)?);
        if table.len() != cyl.len() {
            return Err(SftError::TableMismatch(format!(
                "table has {} entries but there are {} admissible words of length {k}",
                table.len(),
                cyl.len()
            )));
        }
        let mut values = vec![T::zero(); cyl.len()];
        for (key, &v) in table {
            let w: Word = key.parse()?;
            let i = cyl.index_of(&w.symbols).ok_or_else(|| {
                SftError::TableMismatch(format!("{key:?} is not an admissible word of length {k}"))
            })?;
            values[i] = v;
        }
        Ok(DepthKFunction { cyl, values })
    }

    /// The `word → value` table.
    pub fn to_table(&self) -> BTreeMap<String, T> {
        self.cyl
            .words()
            .zip(&self.values)
            .map(|(w, &v)| (Word::new(w.to_vec()).to_string(), v))
            .collect()
    }

    /// The depth `k`.
    pub fn depth(&self) -> usize {
        self.cyl.depth()
    }

    /// The underlying shift.
    pub fn sft(&self) -> &Sft {
        self.cyl.sft()
    }

    /// The shared cylinder set.
    pub fn cylinders(&self) -> &Arc<Cylinders> {
        &self.cyl
    }

    /// Values in cylinder order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Consumes the function, returning its value table.
    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value on the cylinder of index `i`.
    #[inline]
    pub fn at(&self, i: usize) -> T {
        self.values[i]
    }

    /// Value at a sequence given by (at least) its first `k` symbols.
    pub fn eval(&self, word: &[usize]) -> Option<T> {
        let k = self.depth();
        if word.len() < k {
            return None;
        }
        self.cyl.index_of(&word[..k]).map(|i| self.values[i])
    }

    /// Re-expresses the function on the deeper cylinders `target`.
    pub fn promote_to(&self, target: &Arc<Cylinders>) -> Result<Self, SftError> {
        if target.sft() != self.sft() || target.depth() < self.depth() {
            return Err(SftError::DepthMismatch(format!(
                "cannot promote depth {} to depth {}",
                self.depth(),
                target.depth()
            )));
        }
        if target.depth() == self.depth() {
            return Ok(DepthKFunction {
                cyl: Arc::clone(target),
                values: self.values.clone(),
            });
        }
        let k = self.depth();
        let values = target
            .words()
            .map(|w| self.values[self.cyl.index_of(&w[..k]).expect("prefix is admissible")])
            .collect();
        Ok(DepthKFunction {
            cyl: Arc::clone(target),
            values,
        })
    }

    /// Re-expresses the function at depth `depth ≥ k`.
    pub fn promote(&self, depth: usize) -> Result<Self, SftError> {
        if depth == self.depth() {
            return Ok(self.clone());
        }
        self.promote_to(&Arc::new(Cylinders::new(self.sft(), depth)?))
    }

    /// `f ∘ σ` on cylinders `target` of depth at least `k + 1`.
    pub fn compose_shift_on(&self, target: &Arc<Cylinders>) -> Result<Self, SftError> {
        let k = self.depth();
        if target.sft() != self.sft() || target.depth() < k + 1 {
            return Err(SftError::DepthMismatch(format!(
                "f∘σ of a depth-{k} function needs depth at least {}",
                k + 1
            )));
        }
        let values = target
            .words()
            .map(|w| self.values[self.cyl.index_of(&w[1..=k]).expect("suffix is admissible")])
            .collect();
        Ok(DepthKFunction {
            cyl: Arc::clone(target),
            values,
        })
    }

    /// `f ∘ σ`, a function of depth `k + 1`.
    pub fn compose_shift(&self) -> Result<Self, SftError> {
        self.compose_shift_on(&Arc::new(Cylinders::new(self.sft(), self.depth() + 1)?))
    }

    /// The coboundary `V − V∘σ` of depth `k + 1`.
    pub fn coboundary(&self) -> Result<Self, SftError> {
        let shifted = self.compose_shift()?;
        let base = self.promote_to(shifted.cylinders())?;
        base.zip_with(&shifted, |a, b| a - b)
    }

    /// Applies `f` pointwise.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DepthKFunction<U> {
        DepthKFunction {
            cyl: Arc::clone(&self.cyl),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Combines two functions pointwise after promoting both to the larger
    /// depth.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self, SftError> {
        if self.sft() != other.sft() {
            return Err(SftError::DepthMismatch(
                "functions live on different shifts".into(),
            ));
        }
        let (a, b) = match self.depth().cmp(&other.depth()) {
            std::cmp::Ordering::Equal => (self.clone(), other.clone()),
            std::cmp::Ordering::Less => (self.promote_to(&other.cyl)?, other.clone()),
            std::cmp::Ordering::Greater => (self.clone(), other.promote_to(&self.cyl)?),
        };
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Ok(DepthKFunction { cyl: a.cyl, values })
    }

    /// Multiplies every value by `c`.
    pub fn scale(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    /// Pointwise sum.
    pub fn try_add(&self, other: &Self) -> Result<Self, SftError> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Pointwise difference.
    pub fn try_sub(&self, other: &Self) -> Result<Self, SftError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SftError> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Adds a constant.
    pub fn add_constant(&self, c: T) -> Self {
        self.map(|v| v + c)
    }
}

impl DepthKFunction<f64> {
    /// `max |f|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest value.
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest value.
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether `|f − g|∞ ≤ tol` after promotion to a common depth.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.sup_norm() <= tol,
            Err(_) => false,
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $method:ident) => {
        impl<T: Scalar> $tr<&DepthKFunction<T>> for &DepthKFunction<T> {
            type Output = DepthKFunction<T>;

            /// # Panics
            ///
            /// Panics if the operands live on different shifts.
            fn $m(self, rhs: &DepthKFunction<T>) -> DepthKFunction<T> {
                self.$method(rhs).expect("operands live on the same shift")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<T: Scalar> Neg for &DepthKFunction<T> {
    type Output = DepthKFunction<T>;

    fn neg(self) -> DepthKFunction<T> {
        self.map(|v| -v)
    }
}
