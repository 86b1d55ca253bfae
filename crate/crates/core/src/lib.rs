//! Sum-of-squares programming on top of a first-order conic solver.
//!
//! SOS constraints are assembled into `min cᵀξ  s.t.  Aξ = b, ξ ∈ 𝒦` using
//! monomial-basis coefficient matching. In that formulation the rows of the
//! Gram-matrix block of `A` are mutually orthogonal, so `I + AAᵀ` is a
//! diagonal matrix plus a low-rank term. The ADMM solver for the homogeneous
//! self-dual embedding uses this to replace its large affine projection with
//! a small cached Cholesky factorization.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64`/`*32` aliases below name the common instantiations.

pub mod admm;
pub mod assembly;
pub mod baseline;
pub mod error;
pub mod experiments;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod sparse;

pub use admm::{solve, solve_with_callback, AffineMethod, SolveStatus, SolverOptions};
pub use assembly::{
    assemble_matrix, assemble_multi, assemble_scalar, assemble_weighted, build_indicator,
    verify_partial_orthogonality, Cone, OrthogonalityReport, SosKind,
};
pub use error::{Result, SosError};
pub use poly::{enumerate_basis, format_polynomial, parse_polynomial, MonomialBasis, MultiIndex};
pub use scalar::Scalar;

pub type Polynomial64 = poly::Polynomial<f64>;
pub type Polynomial32 = poly::Polynomial<f32>;
pub type ConicProblem64 = assembly::ConicProblem<f64>;
pub type ConicProblem32 = assembly::ConicProblem<f32>;
pub type SosConstraintSpec64 = assembly::SosConstraintSpec<f64>;
pub type SosConstraintSpec32 = assembly::SosConstraintSpec<f32>;
pub type SolveOutcome64 = admm::SolveOutcome<f64>;
pub type SolveOutcome32 = admm::SolveOutcome<f32>;
