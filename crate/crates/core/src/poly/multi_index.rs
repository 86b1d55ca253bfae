use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SosError};

/// Exponent vector α ∈ ℕⁿ of a monomial x^α.
///
/// Ordering is graded lexicographic: total degree first, then the exponent
/// vectors compared so that `x1` precedes `x2` (i.e. `(1,0) < (0,1)`). This
/// yields the familiar monomial vector `[1, x1, x2, x1^2, x1*x2, x2^2, ...]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex {
    exponents: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        MultiIndex { exponents, degree }
    }

    pub fn zero(num_vars: usize) -> Self {
        MultiIndex {
            exponents: vec![0; num_vars],
            degree: 0,
        }
    }

    /// The multi-index of the single variable `x_{var+1}`.
    pub fn unit(num_vars: usize, var: usize) -> Self {
        let mut exponents = vec![0; num_vars];
        exponents[var] = 1;
        MultiIndex {
            exponents,
            degree: 1,
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0
    }

    /// Componentwise sum β + γ.
    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.num_vars() != other.num_vars() {
            return Err(SosError::DimensionMismatch(format!(
                "multi-index lengths {} and {}",
                self.num_vars(),
                other.num_vars()
            )));
        }
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MultiIndex {
            exponents,
            degree: self.degree + other.degree,
        })
    }

    /// Componentwise difference α − β, or `None` if any exponent would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.num_vars() != other.num_vars() || other.degree > self.degree {
            return None;
        }
        let mut exponents = Vec::with_capacity(self.num_vars());
        for (a, b) in self.exponents.iter().zip(&other.exponents) {
            exponents.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex {
            exponents,
            degree: self.degree - other.degree,
        })
    }

    /// Lower the exponent of `var` by one; `None` if it is already zero.
    pub fn lower(&self, var: usize) -> Option<MultiIndex> {
        let e = *self.exponents.get(var)?;
        if e == 0 {
            return None;
        }
        let mut exponents = self.exponents.clone();
        exponents[var] -= 1;
        Some(MultiIndex {
            exponents,
            degree: self.degree - 1,
        })
    }

    /// Evaluate x^α.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    /// Monomial form, e.g. `x1^2*x3`; the zero index prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
