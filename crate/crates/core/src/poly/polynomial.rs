use std::collections::BTreeMap;

use crate::error::{Result, SosError};
use crate::poly::MultiIndex;
use crate::scalar::Scalar;

/// Sparse polynomial in `num_vars` variables. Zero coefficients are never stored.
///
/// The zero polynomial has an empty term map and, by convention, degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T: Scalar> {
    num_vars: usize,
    terms: BTreeMap<MultiIndex, T>,
}

fn check_vars(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(SosError::DimensionMismatch(format!(
            "polynomials in {a} and {b} variables"
        )));
    }
    Ok(())
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: T) -> Self {
        Self::monomial(MultiIndex::zero(num_vars), c)
    }

    /// The polynomial `x_{var+1}` (variables are zero-based here).
    pub fn var(num_vars: usize, var: usize) -> Self {
        Self::monomial(MultiIndex::unit(num_vars, var), T::one())
    }

    pub fn monomial(alpha: MultiIndex, c: T) -> Self {
        let mut p = Self::zero(alpha.num_vars());
        if c != T::zero() {
            p.terms.insert(alpha, c);
        }
        p
    }

    /// Build from (exponents, coefficient) pairs, summing duplicates.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, T)>,
    {
        let mut p = Self::zero(num_vars);
        for (alpha, c) in terms {
            check_vars(num_vars, alpha.num_vars())?;
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, T> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, MultiIndex::degree)
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> T {
        self.terms.get(alpha).copied().unwrap_or_else(T::zero)
    }

    /// Accumulate `c * x^alpha` into `self`, pruning exact cancellations.
    pub fn add_term(&mut self, alpha: MultiIndex, c: T) {
        debug_assert_eq!(alpha.num_vars(), self.num_vars);
        if c == T::zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s == T::zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_vars(self.num_vars, other.num_vars)?;
        let mut out = self.clone();
        for (alpha, &c) in &other.terms {
            out.add_term(alpha.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_vars(self.num_vars, other.num_vars)?;
        let mut out = self.clone();
        for (alpha, &c) in &other.terms {
            out.add_term(alpha.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (alpha, &c) in &self.terms {
            out.add_term(alpha.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_vars(self.num_vars, other.num_vars)?;
        let mut out = Self::zero(self.num_vars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.add(b)?, ca * cb);
            }
        }
        Ok(out)
    }

    /// ∂p/∂x_{var+1}.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (alpha, &c) in &self.terms {
            if let Some(lowered) = alpha.lower(var) {
                let e = alpha.exponents()[var];
                out.add_term(lowered, c * T::of(e as f64));
            }
        }
        out
    }

    /// Gradient as a list of `num_vars` partial derivatives.
    pub fn grad(&self) -> Vec<Self> {
        (0..self.num_vars).map(|i| self.partial(i)).collect()
    }

    /// Lie derivative Σᵢ fᵢ ∂self/∂xᵢ of `self` along the vector field `f`.
    pub fn lie_derivative(&self, field: &[Self]) -> Result<Self> {
        if field.len() != self.num_vars {
            return Err(SosError::DimensionMismatch(format!(
                "vector field has {} components for {} variables",
                field.len(),
                self.num_vars
            )));
        }
        let mut out = Self::zero(self.num_vars);
        for (i, fi) in field.iter().enumerate() {
            check_vars(self.num_vars, fi.num_vars)?;
            let term = fi.mul(&self.partial(i))?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[T]) -> T {
        let xs: Vec<f64> = x.iter().map(|v| v.as_f64()).collect();
        T::of(self.eval_f64(&xs))
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(alpha, c)| c.as_f64() * alpha.eval_f64(x))
            .sum()
    }

    /// Coefficient vector over an ordered monomial list.
    pub fn coefficients_on(&self, monomials: &[MultiIndex]) -> Vec<T> {
        monomials.iter().map(|a| self.coeff(a)).collect()
    }
}
