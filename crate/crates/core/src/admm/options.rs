use serde::{Deserialize, Serialize};

use crate::error::{Result, SosError};

/// How the affine step `(I + Q)⁻¹` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineMethod {
    /// Diagonal-plus-low-rank factorization of `I + AAᵀ`.
    LowRank,
    /// LU of the materialized `I + Q`.
    DenseDirect,
    /// Unpreconditioned CG on `I + AAᵀ`.
    Cg,
}

impl AffineMethod {
    pub fn name(self) -> &'static str {
        match self {
            AffineMethod::LowRank => "lowrank",
            AffineMethod::DenseDirect => "direct",
            AffineMethod::Cg => "cg",
        }
    }
}

impl std::fmt::Display for AffineMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AffineMethod {
    type Err = SosError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowrank" | "low_rank" => Ok(AffineMethod::LowRank),
            "direct" | "dense" | "dense_direct" => Ok(AffineMethod::DenseDirect),
            "cg" => Ok(AffineMethod::Cg),
            other => Err(SosError::InvalidSpec(format!("unknown affine method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Termination tolerance on the largest of the three relative residuals.
    pub tol: f64,
    pub max_iters: usize,
    pub affine_method: AffineMethod,
    pub cg_tol: f64,
    pub cg_max_iters: usize,
    /// Residuals are evaluated every this many iterations (and at the last one).
    pub check_interval: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-3,
            max_iters: 2000,
            affine_method: AffineMethod::LowRank,
            cg_tol: 1e-10,
            cg_max_iters: 1000,
            check_interval: 25,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SosError::InvalidSpec(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(SosError::InvalidSpec("max_iters must be at least 1".into()));
        }
        if self.check_interval == 0 {
            return Err(SosError::InvalidSpec("check_interval must be at least 1".into()));
        }
        if self.affine_method == AffineMethod::Cg && !(self.cg_tol > 0.0 && self.cg_max_iters > 0) {
            return Err(SosError::InvalidSpec("cg_tol and cg_max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let o = SolverOptions::default();
        assert_eq!((o.tol, o.max_iters, o.check_interval), (1e-3, 2000, 25));
        o.validate().unwrap();
        assert!(SolverOptions { tol: 0.0, ..o.clone() }.validate().is_err());
        assert!(SolverOptions { max_iters: 0, ..o }.validate().is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [AffineMethod::LowRank, AffineMethod::DenseDirect, AffineMethod::Cg] {
            assert_eq!(m.name().parse::<AffineMethod>().unwrap(), m);
        }
        assert!("qr".parse::<AffineMethod>().is_err());
    }
}
