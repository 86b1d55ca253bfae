//! Reference affine solvers and the per-iteration flop model.

mod cg;
mod dense;
mod flops;

pub use cg::{cg_normal, solve_affine_cg, CgAffine, CgInfo};
pub use dense::{solve_affine_dense, DenseAffine, DENSE_DIM_LIMIT};
pub use flops::{flop_model, FlopEstimate};
