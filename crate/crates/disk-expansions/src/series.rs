use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Truncated power series in one variable with exact rational coefficients.
/// All operands of a binary operation share the same truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, BigRational::one())
    }

    /// `c · Uᵏ`, or zero if `k` exceeds the order.
    pub fn monomial(order: usize, k: usize, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series of a polynomial given by integer coefficients, truncated.
    pub fn from_ints(order: usize, poly: &[BigInt]) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in poly.iter().enumerate().take(order + 1) {
            s.coeffs[k] = BigRational::from_integer(c.clone());
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return out;
        };
        for i in va..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in vb..=order - i {
                if !other.coeffs[j].is_zero() {
                    out.coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; `None` if the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return None;
        }
        let order = self.order();
        let mut out = Self::zero(order);
        out.coeffs[0] = c0.recip();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = -acc / c0;
        }
        Some(out)
    }

    /// `tanh(m u)` as a series in `U = tanh u`:
    /// `((1+U)ᵐ − (1−U)ᵐ) / ((1+U)ᵐ + (1−U)ᵐ)`.
    pub fn tanh_multiple(m: u32, order: usize) -> Self {
        if m == 0 {
            return Self::zero(order);
        }
        let plus = binomial_row(m);
        let minus: Vec<BigInt> = plus.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c }).collect();
        let num: Vec<BigInt> = plus.iter().zip(&minus).map(|(a, b)| a - b).collect();
        let den: Vec<BigInt> = plus.iter().zip(&minus).map(|(a, b)| a + b).collect();
        let den = Self::from_ints(order, &den).inverse().expect("constant term is 2");
        Self::from_ints(order, &num).mul(&den)
    }
}

fn binomial_row(m: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..m {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for k in 1..row.len() {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
    }
    row
}
