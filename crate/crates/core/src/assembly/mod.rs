//! Translation of SOS constraints into standard-form conic programs.

mod build;
pub mod export;
mod indicator;
mod problem;
mod spec;

pub use build::{assemble_matrix, assemble_multi, assemble_scalar, assemble_weighted};
pub use export::{read_sdpa, to_dump, to_json, to_sdpa, ProblemDump, SdpaData};
pub use indicator::{build_indicator, IndicatorMatrix};
pub use problem::{verify_partial_orthogonality, Cone, ConicProblem, OrthogonalityReport, RowLabel};
pub use spec::{PolyMatrix, SosConstraintSpec, SosKind};
