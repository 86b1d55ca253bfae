use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::admm::affine::AffineSolver;
use crate::admm::cache::factorization_count;
use crate::admm::cone::{dist_to_dual_cone, project_cone_in_place};
use crate::admm::options::{AffineMethod, SolverOptions};
use crate::assembly::ConicProblem;
use crate::error::{Result, SosError};
use crate::scalar::{dot, norm2, Scalar};

/// ADMM iterate for the embedding: `u = (ξ, y, τ)`, `v = (z, s, κ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IterateState<T: Scalar> {
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub iteration: usize,
}

impl<T: Scalar> IterateState<T> {
    /// The all-zero state is a fixed point, so start from `τ = κ = 1`.
    pub fn initial(problem: &ConicProblem<T>) -> Self {
        let dim = problem.hsde_dim();
        let mut u = vec![T::zero(); dim];
        let mut v = vec![T::zero(); dim];
        u[dim - 1] = T::one();
        v[dim - 1] = T::one();
        IterateState { u, v, iteration: 0 }
    }

    pub fn tau(&self) -> T {
        self.u[self.u.len() - 1]
    }

    pub fn kappa(&self) -> T {
        self.v[self.v.len() - 1]
    }

    pub fn xi<'a>(&'a self, problem: &ConicProblem<T>) -> &'a [T] {
        &self.u[..problem.num_cols()]
    }

    pub fn y<'a>(&'a self, problem: &ConicProblem<T>) -> &'a [T] {
        &self.u[problem.num_cols()..problem.num_cols() + problem.m()]
    }

    pub fn z<'a>(&'a self, problem: &ConicProblem<T>) -> &'a [T] {
        &self.v[..problem.num_cols()]
    }
}

/// One iteration: `û = (I+Q)⁻¹(u+v)`, `u = P_𝒞(û − v)`, `v = v − û + u`.
pub fn admm_step<T: Scalar>(
    state: &mut IterateState<T>,
    affine: &AffineSolver<T>,
    problem: &ConicProblem<T>,
) -> Result<()> {
    let w: Vec<T> = state.u.iter().zip(&state.v).map(|(&a, &b)| a + b).collect();
    let u_hat = affine.project(problem, &w)?;
    for ((ui, &hi), &vi) in state.u.iter_mut().zip(&u_hat).zip(&state.v) {
        *ui = hi - vi;
    }
    let iteration = state.iteration + 1;
    if !state.u.iter().all(|x| x.is_finite_value()) {
        return Err(SosError::Divergence { iteration });
    }
    project_cone_in_place(&mut state.u, problem)?;
    for ((vi, &hi), &ui) in state.v.iter_mut().zip(&u_hat).zip(&state.u) {
        *vi += ui - hi;
    }
    if !state.v.iter().all(|x| x.is_finite_value()) {
        return Err(SosError::Divergence { iteration });
    }
    state.iteration = iteration;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

impl Residuals {
    pub const INFINITE: Residuals = Residuals {
        primal: f64::INFINITY,
        dual: f64::INFINITY,
        gap: f64::INFINITY,
    };

    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.gap)
    }
}

/// Relative primal, dual and gap residuals of the scaled iterate `(ξ, y, z)/τ`.
/// Infinite when `τ ≤ 0`.
pub fn residuals<T: Scalar>(state: &IterateState<T>, problem: &ConicProblem<T>) -> Residuals {
    let tau = state.tau();
    if tau <= T::zero() {
        return Residuals::INFINITE;
    }
    let (xi, y, z) = (state.xi(problem), state.y(problem), state.z(problem));
    let (b, c) = (problem.b(), problem.c());
    let a = problem.a();
    let inv = T::one() / tau;

    let mut pr = a.mul_vec(xi);
    for (p, &bi) in pr.iter_mut().zip(b) {
        *p = *p * inv - bi;
    }
    let mut du = a.mul_t_vec(y);
    for ((d, &zi), &ci) in du.iter_mut().zip(z).zip(c) {
        *d = (*d + zi) * inv - ci;
    }
    let cx = dot(c, xi) * inv;
    let by = dot(b, y) * inv;
    Residuals {
        primal: (norm2(&pr) / (T::one() + norm2(b))).as_f64(),
        dual: (norm2(&du) / (T::one() + norm2(c))).as_f64(),
        gap: ((cx - by).abs() / (T::one() + cx.abs() + by.abs())).as_f64(),
    }
}

/// Reported at every residual check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub iteration: usize,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub tau: f64,
    pub kappa: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    MaxIters,
    Inconclusive,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::PrimalInfeasible => "primal_infeasible",
            SolveStatus::DualInfeasible => "dual_infeasible",
            SolveStatus::MaxIters => "max_iters",
            SolveStatus::Inconclusive => "inconclusive",
        }
    }

    pub fn is_infeasible(self) -> bool {
        matches!(self, SolveStatus::PrimalInfeasible | SolveStatus::DualInfeasible)
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolveStatus {
    type Err = SosError;

    fn from_str(s: &str) -> Result<Self> {
        [
            SolveStatus::Optimal,
            SolveStatus::PrimalInfeasible,
            SolveStatus::DualInfeasible,
            SolveStatus::MaxIters,
            SolveStatus::Inconclusive,
        ]
        .into_iter()
        .find(|st| st.name() == s)
        .ok_or_else(|| SosError::InvalidSpec(format!("unknown status `{s}`")))
    }
}

/// Infeasibility certificate taken from the unscaled iterate.
///
/// For primal infeasibility `normalized = y / bᵀy`, so `bᵀ normalized = 1` and
/// `−Aᵀ normalized` lies within `violation` of 𝒦*. For dual infeasibility
/// `normalized = ξ / (−cᵀξ)` with `cᵀ normalized = −1`, `normalized ∈ 𝒦` and
/// `‖A normalized‖ = violation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T: Scalar> {
    pub xi: Vec<T>,
    pub y: Vec<T>,
    pub normalized: Vec<T>,
    pub violation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub affine_method: AffineMethod,
    /// Small-system factorizations performed while setting up this solve.
    pub factorizations: usize,
    /// Largest `|uᵀv| / (1 + ‖u‖‖v‖)` seen over all iterations.
    pub max_complementarity: f64,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome<T: Scalar> {
    pub status: SolveStatus,
    /// `ξ/τ`; also filled on `MaxIters` when `τ > 0` as the best available estimate.
    pub x: Option<Vec<T>>,
    pub y_dual: Option<Vec<T>>,
    /// `cᵀξ/τ`, the conic objective.
    pub objective: Option<T>,
    pub certificate: Option<Certificate<T>>,
    /// Residuals at the final check.
    pub residuals: Residuals,
    pub history: Vec<Progress>,
    pub iterations: usize,
    pub tau: T,
    pub kappa: T,
    pub setup_time: Duration,
    pub iterate_time: Duration,
    pub stats: SolveStats,
}

impl<T: Scalar> SolveOutcome<T> {
    pub fn solve_time(&self) -> Duration {
        self.setup_time + self.iterate_time
    }
}

pub fn solve<T: Scalar>(problem: &ConicProblem<T>, options: &SolverOptions) -> Result<SolveOutcome<T>> {
    solve_with_callback(problem, options, |_| {})
}

/// Run ADMM until the residuals drop below `tol`, a certificate of
/// infeasibility is found, or `max_iters` is reached. The callback sees every
/// residual check.
pub fn solve_with_callback<T: Scalar>(
    problem: &ConicProblem<T>,
    options: &SolverOptions,
    mut callback: impl FnMut(&Progress),
) -> Result<SolveOutcome<T>> {
    options.validate()?;
    let setup_start = Instant::now();
    let before = factorization_count();
    let affine = AffineSolver::build(problem, options)?;
    let factorizations = factorization_count() - before;
    let setup_time = setup_start.elapsed();

    let iter_start = Instant::now();
    let mut state = IterateState::initial(problem);
    let mut history = Vec::new();
    let mut max_compl = 0.0f64;
    let mut last = Residuals::INFINITE;
    let mut status = None;
    let mut certificate = None;

    while state.iteration < options.max_iters {
        admm_step(&mut state, &affine, problem)?;
        let compl = dot(&state.u, &state.v).abs() / (T::one() + norm2(&state.u) * norm2(&state.v));
        max_compl = max_compl.max(compl.as_f64());

        let k = state.iteration;
        if k % options.check_interval != 0 && k != options.max_iters {
            continue;
        }
        last = residuals(&state, problem);
        let progress = Progress {
            iteration: k,
            primal: last.primal,
            dual: last.dual,
            gap: last.gap,
            tau: state.tau().as_f64(),
            kappa: state.kappa().as_f64(),
        };
        log::debug!(
            "iter {k}: primal {:.3e} dual {:.3e} gap {:.3e} tau {:.3e} kappa {:.3e}",
            progress.primal,
            progress.dual,
            progress.gap,
            progress.tau,
            progress.kappa
        );
        callback(&progress);
        history.push(progress);

        if state.tau() > T::zero() && last.max() <= options.tol {
            status = Some(SolveStatus::Optimal);
            break;
        }
        if state.tau() < state.kappa() {
            if let Some((st, cert)) = infeasibility(&state, problem, options.tol)? {
                status = Some(st);
                certificate = Some(cert);
                break;
            }
        }
    }

    let tau = state.tau();
    let kappa = state.kappa();
    let status = status.unwrap_or_else(|| {
        let scale = T::one() + norm2(&state.u) + norm2(&state.v);
        let floor = T::of(1e-9) * scale;
        if tau <= floor && kappa <= floor {
            SolveStatus::Inconclusive
        } else {
            SolveStatus::MaxIters
        }
    });
    let scaled = tau > T::zero() && !status.is_infeasible();
    let (x, y_dual, objective) = if scaled {
        let inv = T::one() / tau;
        let x: Vec<T> = state.xi(problem).iter().map(|&v| v * inv).collect();
        let y: Vec<T> = state.y(problem).iter().map(|&v| v * inv).collect();
        let obj = dot(problem.c(), &x);
        (Some(x), Some(y), Some(obj))
    } else {
        (None, None, None)
    };

    Ok(SolveOutcome {
        status,
        x,
        y_dual,
        objective,
        certificate,
        residuals: last,
        history,
        iterations: state.iteration,
        tau,
        kappa,
        setup_time,
        iterate_time: iter_start.elapsed(),
        stats: SolveStats {
            affine_method: options.affine_method,
            factorizations,
            max_complementarity: max_compl,
        },
    })
}

/// Certificate tests on the unscaled iterate.
fn infeasibility<T: Scalar>(
    state: &IterateState<T>,
    problem: &ConicProblem<T>,
    tol: f64,
) -> Result<Option<(SolveStatus, Certificate<T>)>> {
    let (xi, y) = (state.xi(problem), state.y(problem));
    let by = dot(problem.b(), y);
    if by > T::zero() {
        let normalized: Vec<T> = y.iter().map(|&v| v / by).collect();
        let neg_aty: Vec<T> = problem.a().mul_t_vec(&normalized).into_iter().map(|v| -v).collect();
        let violation = dist_to_dual_cone(&neg_aty, problem.cones())?.as_f64();
        if violation <= tol {
            return Ok(Some((
                SolveStatus::PrimalInfeasible,
                Certificate {
                    xi: xi.to_vec(),
                    y: y.to_vec(),
                    normalized,
                    violation,
                },
            )));
        }
    }
    let cx = dot(problem.c(), xi);
    if cx < T::zero() {
        let normalized: Vec<T> = xi.iter().map(|&v| v / -cx).collect();
        let violation = norm2(&problem.a().mul_vec(&normalized)).as_f64();
        if violation <= tol {
            return Ok(Some((
                SolveStatus::DualInfeasible,
                Certificate {
                    xi: xi.to_vec(),
                    y: y.to_vec(),
                    normalized,
                    violation,
                },
            )));
        }
    }
    Ok(None)
}
