//! ADMM on the homogeneous self-dual embedding.

pub(crate) mod affine;
mod cache;
mod cone;
mod operator;
mod options;
mod solver;

pub use affine::AffineSolver;
pub use cache::{factorization_count, project_affine, AffineProjectorCache};
pub use cone::{dist_to_dual_cone, project_cone, project_onto_k, project_psd_block};
pub use operator::HsdeOperator;
pub use options::{AffineMethod, SolverOptions};
pub use solver::{
    admm_step, residuals, solve, solve_with_callback, Certificate, IterateState, Progress, Residuals,
    SolveOutcome, SolveStats, SolveStatus,
};
