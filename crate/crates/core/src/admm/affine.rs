//! Block elimination for `(I + Q)û = w`.
//!
//! With `M = [I −Aᵀ; A I]` and `ζ = (c, −b)`, eliminating `û₃` gives
//! `(M + ζζᵀ)(û₁, û₂) = (w₁ − c w₃, w₂ + b w₃)`. The rank-one term is handled
//! by Sherman–Morrison using a precomputed `M⁻¹ζ`, and each `M` solve reduces
//! to `(I + AAᵀ)σ₂ = w₂ − Aw₁`, `σ₁ = w₁ + Aᵀσ₂`. The normal-equation solve is
//! pluggable so the low-rank, CG and dense routes share this chain.

use crate::admm::cache::AffineProjectorCache;
use crate::admm::options::{AffineMethod, SolverOptions};
use crate::assembly::ConicProblem;
use crate::baseline::{CgAffine, DenseAffine};
use crate::error::{Result, SosError};
use crate::scalar::{axpy, dot, Scalar};

/// Solve `M σ = rhs` given a solver for `(I + AAᵀ)σ₂ = r`.
pub(crate) fn m_solve<T: Scalar>(
    problem: &ConicProblem<T>,
    rhs: &[T],
    mut normal: impl FnMut(&[T]) -> Result<Vec<T>>,
) -> Result<Vec<T>> {
    let nv = problem.num_cols();
    let (w1, w2) = rhs.split_at(nv);
    let a = problem.a();
    let mut r = w2.to_vec();
    a.gemv_cols(0..nv, -T::one(), w1, &mut r);
    let sigma2 = normal(&r)?;
    let mut out = w1.to_vec();
    a.gemv_t_cols(0..nv, T::one(), &sigma2, T::one(), &mut out);
    out.extend_from_slice(&sigma2);
    Ok(out)
}

/// Solve `(I + Q)û = w` given `M⁻¹ζ`, `1 + ζᵀM⁻¹ζ` and a normal-equation solver.
pub(crate) fn hsde_solve<T: Scalar>(
    problem: &ConicProblem<T>,
    w: &[T],
    minv_zeta: &[T],
    denom: T,
    normal: impl FnMut(&[T]) -> Result<Vec<T>>,
) -> Result<Vec<T>> {
    let (nv, m) = (problem.num_cols(), problem.m());
    if w.len() != nv + m + 1 {
        return Err(SosError::DimensionMismatch(format!(
            "embedding vector has length {}, expected {}",
            w.len(),
            nv + m + 1
        )));
    }
    let w3 = w[nv + m];
    let mut rhs = w[..nv + m].to_vec();
    axpy(-w3, problem.c(), &mut rhs[..nv]);
    axpy(w3, problem.b(), &mut rhs[nv..]);

    let mut u = m_solve(problem, &rhs, normal)?;
    let zeta_dot = dot(problem.c(), &u[..nv]) - dot(problem.b(), &u[nv..]);
    axpy(-zeta_dot / denom, minv_zeta, &mut u);
    let u3 = w3 + dot(problem.c(), &u[..nv]) - dot(problem.b(), &u[nv..]);
    u.push(u3);
    Ok(u)
}

/// The affine-projection route chosen for a solve.
#[derive(Debug)]
pub enum AffineSolver<T: Scalar> {
    LowRank(AffineProjectorCache<T>),
    DenseDirect(DenseAffine<T>),
    Cg(CgAffine<T>),
}

impl<T: Scalar> AffineSolver<T> {
    pub fn build(problem: &ConicProblem<T>, options: &SolverOptions) -> Result<Self> {
        Ok(match options.affine_method {
            AffineMethod::LowRank => AffineSolver::LowRank(AffineProjectorCache::build(problem)?),
            AffineMethod::DenseDirect => AffineSolver::DenseDirect(DenseAffine::build(problem)?),
            AffineMethod::Cg => {
                AffineSolver::Cg(CgAffine::build(problem, options.cg_tol, options.cg_max_iters)?)
            }
        })
    }

    pub fn project(&self, problem: &ConicProblem<T>, w: &[T]) -> Result<Vec<T>> {
        match self {
            AffineSolver::LowRank(cache) => crate::admm::cache::project_affine(w, cache, problem),
            AffineSolver::DenseDirect(dense) => dense.solve(w),
            AffineSolver::Cg(cg) => cg.solve(problem, w).map(|(u, _)| u),
        }
    }
}
