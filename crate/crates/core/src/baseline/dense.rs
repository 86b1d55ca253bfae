use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::admm::HsdeOperator;
use crate::assembly::ConicProblem;
use crate::error::{Result, SosError};
use crate::scalar::Scalar;

/// Largest embedding dimension the dense route will materialize.
pub const DENSE_DIM_LIMIT: usize = 5000;

/// Affine projection by a pivoted LU factorization of the materialized `I + Q`.
/// Factorized once; each solve is a pair of triangular substitutions.
#[derive(Debug)]
pub struct DenseAffine<T: Scalar> {
    lu: LU<T, Dyn, Dyn>,
}

impl<T: Scalar> DenseAffine<T> {
    pub fn build(problem: &ConicProblem<T>) -> Result<Self> {
        let dim = problem.hsde_dim();
        if dim > DENSE_DIM_LIMIT {
            return Err(SosError::DenseGuard {
                dim,
                limit: DENSE_DIM_LIMIT,
            });
        }
        let q = HsdeOperator::new(problem).to_dense();
        let i_plus_q = q + DMatrix::identity(dim, dim);
        Ok(DenseAffine { lu: i_plus_q.lu() })
    }

    pub fn solve(&self, w: &[T]) -> Result<Vec<T>> {
        if w.len() != self.lu.l().nrows() {
            return Err(SosError::DimensionMismatch(format!(
                "embedding vector has length {}, expected {}",
                w.len(),
                self.lu.l().nrows()
            )));
        }
        self.lu
            .solve(&DVector::from_column_slice(w))
            .map(|v| v.as_slice().to_vec())
            .ok_or_else(|| SosError::Numeric("I + Q is singular".into()))
    }
}

/// One-shot dense solve of `(I + Q)û = w`.
pub fn solve_affine_dense<T: Scalar>(problem: &ConicProblem<T>, w: &[T]) -> Result<Vec<T>> {
    DenseAffine::build(problem)?.solve(w)
}
