use crate::admm::affine::{hsde_solve, m_solve};
use crate::assembly::ConicProblem;
use crate::error::Result;
use crate::scalar::{axpy, dot, Scalar};

/// Outcome of one conjugate-gradient normal-equation solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgInfo {
    pub iterations: usize,
    /// Final `‖r‖ / ‖rhs‖` (0 for a zero right-hand side).
    pub relative_residual: f64,
    pub converged: bool,
}

/// Unpreconditioned CG on `(I + AAᵀ)σ = rhs`, applying the operator as
/// `x + A(Aᵀx)`. Returns the best iterate when `max_iters` runs out.
pub fn cg_normal<T: Scalar>(problem: &ConicProblem<T>, rhs: &[T], tol: f64, max_iters: usize) -> (Vec<T>, CgInfo) {
    let m = problem.m();
    let a = problem.a();
    let nv = problem.num_cols();
    let mut x = vec![T::zero(); m];
    let rhs_norm = dot(rhs, rhs).sqrt();
    if rhs_norm == T::zero() {
        return (
            x,
            CgInfo {
                iterations: 0,
                relative_residual: 0.0,
                converged: true,
            },
        );
    }
    let target = T::of(tol) * rhs_norm;
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut tmp = vec![T::zero(); nv];
    let mut best = (rs.sqrt(), x.clone());
    let mut iterations = 0;
    while iterations < max_iters && rs.sqrt() > target {
        a.gemv_t_cols(0..nv, T::one(), &p, T::zero(), &mut tmp);
        let mut kp = p.clone();
        a.gemv_cols(0..nv, T::one(), &tmp, &mut kp);
        let curvature = dot(&p, &kp);
        if curvature <= T::zero() {
            break;
        }
        let alpha = rs / curvature;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &kp, &mut r);
        let rs_new = dot(&r, &r);
        iterations += 1;
        if rs_new.sqrt() < best.0 {
            best = (rs_new.sqrt(), x.clone());
        }
        let beta = rs_new / rs;
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_new;
    }
    let relative_residual = (best.0 / rhs_norm).as_f64();
    let converged = best.0 <= target;
    (
        best.1,
        CgInfo {
            iterations,
            relative_residual,
            converged,
        },
    )
}

/// Affine projection with CG for the inner normal equations.
#[derive(Clone, Debug)]
pub struct CgAffine<T: Scalar> {
    minv_zeta: Vec<T>,
    denom: T,
    tol: f64,
    max_iters: usize,
}

impl<T: Scalar> CgAffine<T> {
    pub fn build(problem: &ConicProblem<T>, tol: f64, max_iters: usize) -> Result<Self> {
        let zeta: Vec<T> = problem
            .c()
            .iter()
            .copied()
            .chain(problem.b().iter().map(|&b| -b))
            .collect();
        let minv_zeta = m_solve(problem, &zeta, |r| Ok(cg_normal(problem, r, tol, max_iters).0))?;
        let denom = T::one() + dot(&zeta, &minv_zeta);
        Ok(CgAffine {
            minv_zeta,
            denom,
            tol,
            max_iters,
        })
    }

    /// Solve `(I + Q)û = w`; the info reports the inner CG solve.
    pub fn solve(&self, problem: &ConicProblem<T>, w: &[T]) -> Result<(Vec<T>, CgInfo)> {
        let mut info = None;
        let u = hsde_solve(problem, w, &self.minv_zeta, self.denom, |r| {
            let (s, i) = cg_normal(problem, r, self.tol, self.max_iters);
            info = Some(i);
            Ok(s)
        })?;
        Ok((u, info.expect("normal solve ran")))
    }
}

/// One-shot CG affine solve of `(I + Q)û = w`.
pub fn solve_affine_cg<T: Scalar>(
    problem: &ConicProblem<T>,
    w: &[T],
    cg_tol: f64,
    cg_max: usize,
) -> Result<(Vec<T>, CgInfo)> {
    CgAffine::build(problem, cg_tol, cg_max)?.solve(problem, w)
}
