use std::cell::Cell;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::admm::affine::{hsde_solve, m_solve};
use crate::assembly::{verify_partial_orthogonality, ConicProblem};
use crate::error::{Result, SosError};
use crate::scalar::{dot, Scalar};

thread_local! {
    static FACTORIZATIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of small-system factorizations performed on this thread so far.
pub fn factorization_count() -> usize {
    FACTORIZATIONS.with(Cell::get)
}

/// Everything the low-rank affine projection needs, computed once per problem.
///
/// With `P = I + A_orth A_orthᵀ` diagonal, `I + AAᵀ = P + A_low A_lowᵀ` and
///
/// ```text
/// (I + AAᵀ)⁻¹ = P⁻¹ − P⁻¹ A_low (I + A_lowᵀ P⁻¹ A_low)⁻¹ A_lowᵀ P⁻¹
/// ```
///
/// so each solve needs only the Cholesky factor of the small matrix
/// `I + A_lowᵀ P⁻¹ A_low` of order `lowrank_width`.
#[derive(Clone, Debug)]
pub struct AffineProjectorCache<T: Scalar> {
    p_inv: Vec<T>,
    chol_small: Option<Cholesky<T, Dyn>>,
    minv_zeta: Vec<T>,
    denom: T,
    lowrank_width: usize,
}

impl<T: Scalar> AffineProjectorCache<T> {
    pub fn build(problem: &ConicProblem<T>) -> Result<Self> {
        let report = verify_partial_orthogonality(problem);
        if let Some((row_a, row_b)) = report.offending {
            return Err(SosError::NotOrthogonal { row_a, row_b });
        }
        let p_inv: Vec<T> = report.diag.iter().map(|&d| T::one() / (T::one() + T::of(d))).collect();

        let width = problem.lowrank_width();
        let chol_small = if width == 0 {
            None
        } else {
            let a = problem.a();
            let mut by_row: Vec<Vec<(usize, T)>> = vec![Vec::new(); problem.m()];
            for j in 0..width {
                let (rows, vals) = a.column(j);
                for (&r, &v) in rows.iter().zip(vals) {
                    by_row[r].push((j, v));
                }
            }
            let mut small = DMatrix::<T>::identity(width, width);
            for (r, entries) in by_row.iter().enumerate() {
                let w = p_inv[r];
                for &(j, vj) in entries {
                    let s = vj * w;
                    for &(k, vk) in entries {
                        small[(j, k)] += s * vk;
                    }
                }
            }
            FACTORIZATIONS.with(|c| c.set(c.get() + 1));
            Some(Cholesky::new(small).ok_or_else(|| {
                SosError::Numeric("Cholesky of I + A_lowᵀP⁻¹A_low failed".into())
            })?)
        };

        let mut cache = AffineProjectorCache {
            p_inv,
            chol_small,
            minv_zeta: Vec::new(),
            denom: T::one(),
            lowrank_width: width,
        };
        let zeta: Vec<T> = problem
            .c()
            .iter()
            .copied()
            .chain(problem.b().iter().map(|&b| -b))
            .collect();
        let minv_zeta = m_solve(problem, &zeta, |r| Ok(cache.solve_normal(problem, r)))?;
        cache.denom = T::one() + dot(&zeta, &minv_zeta);
        cache.minv_zeta = minv_zeta;
        Ok(cache)
    }

    pub fn p_inv(&self) -> &[T] {
        &self.p_inv
    }

    /// Lower-triangular factor of `I + A_lowᵀP⁻¹A_low`; empty when the width is 0.
    pub fn chol_small(&self) -> DMatrix<T> {
        self.chol_small
            .as_ref()
            .map_or_else(|| DMatrix::zeros(0, 0), |c| c.l())
    }

    pub fn minv_zeta(&self) -> &[T] {
        &self.minv_zeta
    }

    /// `1 + ζᵀM⁻¹ζ`.
    pub fn denom(&self) -> T {
        self.denom
    }

    pub fn lowrank_width(&self) -> usize {
        self.lowrank_width
    }

    /// Solve `(I + AAᵀ)σ = r` with the cached factorization.
    pub fn solve_normal(&self, problem: &ConicProblem<T>, r: &[T]) -> Vec<T> {
        let mut sigma: Vec<T> = r.iter().zip(&self.p_inv).map(|(&ri, &pi)| ri * pi).collect();
        if let Some(chol) = &self.chol_small {
            let a = problem.a();
            let cols = 0..self.lowrank_width;
            let mut proj = vec![T::zero(); self.lowrank_width];
            a.gemv_t_cols(cols.clone(), T::one(), &sigma, T::zero(), &mut proj);
            let z = chol.solve(&DVector::from_vec(proj));
            let mut back = vec![T::zero(); problem.m()];
            a.gemv_cols(cols, T::one(), z.as_slice(), &mut back);
            for ((s, &b), &pi) in sigma.iter_mut().zip(&back).zip(&self.p_inv) {
                *s -= b * pi;
            }
        }
        sigma
    }
}

/// Solve `(I + Q)û = w` through the cached low-rank factorization.
pub fn project_affine<T: Scalar>(
    w: &[T],
    cache: &AffineProjectorCache<T>,
    problem: &ConicProblem<T>,
) -> Result<Vec<T>> {
    hsde_solve(problem, w, &cache.minv_zeta, cache.denom, |r| {
        Ok(cache.solve_normal(problem, r))
    })
}
