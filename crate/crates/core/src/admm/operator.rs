use nalgebra::DMatrix;

use crate::assembly::ConicProblem;
use crate::error::{Result, SosError};
use crate::scalar::{dot, Scalar};

/// The skew-symmetric embedding matrix
///
/// ```text
///     [  0   -Aᵀ   c ]
/// Q = [  A    0   -b ]
///     [ -cᵀ   bᵀ   0 ]
/// ```
///
/// applied matrix-free. Vectors are laid out as `(ξ, y, τ)`.
#[derive(Clone, Copy, Debug)]
pub struct HsdeOperator<'a, T: Scalar> {
    problem: &'a ConicProblem<T>,
}

impl<'a, T: Scalar> HsdeOperator<'a, T> {
    pub fn new(problem: &'a ConicProblem<T>) -> Self {
        HsdeOperator { problem }
    }

    pub fn problem(&self) -> &'a ConicProblem<T> {
        self.problem
    }

    /// Length of ξ.
    pub fn num_cols(&self) -> usize {
        self.problem.num_cols()
    }

    pub fn m(&self) -> usize {
        self.problem.m()
    }

    pub fn dim(&self) -> usize {
        self.problem.hsde_dim()
    }

    pub fn apply(&self, u: &[T]) -> Result<Vec<T>> {
        let (nv, m) = (self.num_cols(), self.m());
        if u.len() != nv + m + 1 {
            return Err(SosError::DimensionMismatch(format!(
                "embedding vector has length {}, expected {}",
                u.len(),
                nv + m + 1
            )));
        }
        let p = self.problem;
        let (xi, rest) = u.split_at(nv);
        let (y, tau) = (&rest[..m], rest[m]);
        let mut out = vec![T::zero(); nv + m + 1];
        {
            let (top, rest) = out.split_at_mut(nv);
            p.a().gemv_t_cols(0..nv, -T::one(), y, T::zero(), top);
            for (o, &c) in top.iter_mut().zip(p.c()) {
                *o += c * tau;
            }
            let mid = &mut rest[..m];
            p.a().gemv_cols(0..nv, T::one(), xi, mid);
            for (o, &b) in mid.iter_mut().zip(p.b()) {
                *o -= b * tau;
            }
        }
        out[nv + m] = dot(p.b(), y) - dot(p.c(), xi);
        Ok(out)
    }

    /// Dense Q, for small problems and oracles.
    pub fn to_dense(&self) -> DMatrix<T> {
        let (nv, m) = (self.num_cols(), self.m());
        let d = nv + m + 1;
        let mut q = DMatrix::zeros(d, d);
        for (r, c, v) in self.problem.a().triplets() {
            q[(nv + r, c)] = v;
            q[(c, nv + r)] = -v;
        }
        for (j, &c) in self.problem.c().iter().enumerate() {
            q[(j, d - 1)] = c;
            q[(d - 1, j)] = -c;
        }
        for (i, &b) in self.problem.b().iter().enumerate() {
            q[(nv + i, d - 1)] = -b;
            q[(d - 1, nv + i)] = b;
        }
        q
    }
}
