//! Problem generators for the benchmark families.

mod file;
mod lyapunov;
mod pop;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::admm::SolverOptions;
use crate::error::{Result, SosError};
use crate::report::RunLabel;
use crate::scalar::Scalar;

pub use file::{decision_usage, parse_problem, ProblemFile};
pub use lyapunov::{
    check_lyapunov, field_from_parts, gen_lyapunov, lyapunov_program, q_from_decision, q_pairs, random_field,
    spectral_abscissa, LyapunovCheck, VectorField, BALL_RADIUS_SQ, DEFAULT_CUBIC_SCALE, POSITIVITY_MARGIN,
};
pub use pop::{assemble_pop, gen_pop, pop_objective, GeneratedProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Quartic minimization over the unit ball.
    Pop,
    /// Local stability of a random cubic system.
    Lyapunov,
    FromFile,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Pop => "pop",
            Family::Lyapunov => "lyapunov",
            Family::FromFile => "file",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub family: Family,
    /// Number of variables; ignored for files.
    pub n: usize,
    pub seed: u64,
    pub options: SolverOptions,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Build the instance. `file_text` is the problem file for [`Family::FromFile`].
    pub fn generate<T: Scalar>(&self, file_text: Option<&str>) -> Result<GeneratedProblem<T>> {
        match self.family {
            Family::Pop => gen_pop(self.n),
            Family::Lyapunov => gen_lyapunov(self.n, self.seed),
            Family::FromFile => {
                let text = file_text.ok_or_else(|| SosError::InvalidSpec("no problem file given".into()))?;
                Ok(parse_problem(text)?.into_generated())
            }
        }
    }

    pub fn label(&self) -> RunLabel {
        RunLabel {
            family: self.family.name().to_string(),
            n: self.n,
            seed: (self.family == Family::Lyapunov).then_some(self.seed),
        }
    }
}
