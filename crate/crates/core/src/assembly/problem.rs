use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SosError};
use crate::poly::MultiIndex;
use crate::scalar::Scalar;
use crate::sparse::CscMatrix;

/// One factor of the cone 𝒦. A PSD block of order N occupies N² columns
/// (full column-stacked vec of a symmetric matrix).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cone {
    Free(usize),
    Psd(usize),
}

impl Cone {
    pub fn dim(&self) -> usize {
        match *self {
            Cone::Free(t) => t,
            Cone::Psd(n) => n * n,
        }
    }
}

/// Where an equality row came from: constraint block, monomial, and for
/// matrix-valued constraints the entry (i, j) with i ≤ j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowLabel {
    pub block: usize,
    pub monomial: MultiIndex,
    pub entry: Option<(usize, usize)>,
}

/// Standard-form conic program `min cᵀξ  s.t.  Aξ = b, ξ ∈ 𝒦`.
///
/// Columns are ordered so that the first `lowrank_width` columns form the
/// non-orthogonal block and the remaining columns have mutually orthogonal
/// rows (`A_orth A_orthᵀ` diagonal).
#[derive(Clone, Debug)]
pub struct ConicProblem<T: Scalar> {
    a: CscMatrix<T>,
    b: Vec<T>,
    c: Vec<T>,
    cones: Vec<Cone>,
    num_free: usize,
    lowrank_width: usize,
    rows: Vec<RowLabel>,
    warnings: Vec<String>,
}

impl<T: Scalar> ConicProblem<T> {
    /// Assemble from raw data. `cones` must start with `Free(t)`; the cone
    /// dimensions must cover the columns of `a` and `lowrank_width` must fall
    /// on a cone boundary.
    pub fn new(
        a: CscMatrix<T>,
        b: Vec<T>,
        c: Vec<T>,
        cones: Vec<Cone>,
        lowrank_width: usize,
        rows: Vec<RowLabel>,
    ) -> Result<Self> {
        let m = a.nrows();
        if b.len() != m {
            return Err(SosError::DimensionMismatch(format!("b has {} entries, A has {m} rows", b.len())));
        }
        if c.len() != a.ncols() {
            return Err(SosError::DimensionMismatch(format!(
                "c has {} entries, A has {} columns",
                c.len(),
                a.ncols()
            )));
        }
        if !rows.is_empty() && rows.len() != m {
            return Err(SosError::DimensionMismatch("row label count".into()));
        }
        let num_free = match cones.first() {
            Some(Cone::Free(t)) => *t,
            _ => return Err(SosError::InvalidSpec("cone list must start with Free(t)".into())),
        };
        if cones.iter().skip(1).any(|k| matches!(k, Cone::Free(_))) {
            return Err(SosError::InvalidSpec("only the first cone may be free".into()));
        }
        let total: usize = cones.iter().map(Cone::dim).sum();
        if total != a.ncols() {
            return Err(SosError::DimensionMismatch(format!(
                "cones cover {total} columns, A has {}",
                a.ncols()
            )));
        }
        let mut boundary = false;
        let mut acc = 0;
        for k in &cones {
            if acc == lowrank_width {
                boundary = true;
            }
            acc += k.dim();
        }
        if !(boundary || lowrank_width == total) || lowrank_width < num_free {
            return Err(SosError::InvalidSpec(format!(
                "low-rank width {lowrank_width} does not fall on a cone boundary"
            )));
        }
        Ok(ConicProblem {
            a,
            b,
            c,
            cones,
            num_free,
            lowrank_width,
            rows,
            warnings: Vec::new(),
        })
    }

    pub(crate) fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn a(&self) -> &CscMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn c(&self) -> &[T] {
        &self.c
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Number of equality rows.
    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// Number of free scalar variables `u`.
    pub fn t(&self) -> usize {
        self.num_free
    }

    /// Width of the non-orthogonal column block (`u` plus any multiplier Grams).
    pub fn lowrank_width(&self) -> usize {
        self.lowrank_width
    }

    /// Total column count of `[A_low A_orth]`.
    pub fn num_cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn lowrank_cols(&self) -> Range<usize> {
        0..self.lowrank_width
    }

    pub fn orth_cols(&self) -> Range<usize> {
        self.lowrank_width..self.a.ncols()
    }

    /// Dimension of the embedding vector (ξ, y, τ).
    pub fn hsde_dim(&self) -> usize {
        self.num_cols() + self.m() + 1
    }

    /// Order of the largest PSD block.
    pub fn max_psd_order(&self) -> usize {
        self.cones
            .iter()
            .filter_map(|k| match k {
                Cone::Psd(n) => Some(*n),
                Cone::Free(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn rows(&self) -> &[RowLabel] {
        &self.rows
    }

    pub fn row_monomials(&self) -> Vec<&MultiIndex> {
        self.rows.iter().map(|r| &r.monomial).collect()
    }

    /// Diagnostics raised during assembly (trivially infeasible rows,
    /// unfavourable low-rank width).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Column ranges of each cone, in order.
    pub fn cone_ranges(&self) -> Vec<(Cone, Range<usize>)> {
        let mut acc = 0;
        self.cones
            .iter()
            .map(|&k| {
                let r = acc..acc + k.dim();
                acc = r.end;
                (k, r)
            })
            .collect()
    }
}

/// Result of checking that the orthogonal block has pairwise orthogonal rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub is_diagonal: bool,
    pub diag: Vec<f64>,
    pub max_offdiag_abs: f64,
    /// First overlapping row pair, when not diagonal.
    pub offending: Option<(usize, usize)>,
}

/// Compute `A_orth A_orthᵀ` by sparse row intersection and report whether it
/// is exactly diagonal.
pub fn verify_partial_orthogonality<T: Scalar>(problem: &ConicProblem<T>) -> OrthogonalityReport {
    let a = problem.a();
    let mut diag = vec![T::zero(); problem.m()];
    let mut off: HashMap<(usize, usize), T> = HashMap::new();
    for j in problem.orth_cols() {
        let (rows, vals) = a.column(j);
        for (p, (&r, &v)) in rows.iter().zip(vals).enumerate() {
            diag[r] += v * v;
            for (&r2, &v2) in rows[p + 1..].iter().zip(&vals[p + 1..]) {
                *off.entry((r.min(r2), r.max(r2))).or_insert_with(T::zero) += v * v2;
            }
        }
    }
    let mut max_offdiag_abs = 0.0f64;
    let mut offending = None;
    let mut keys: Vec<_> = off.into_iter().filter(|(_, v)| *v != T::zero()).collect();
    keys.sort_by_key(|(k, _)| *k);
    for (pair, v) in keys {
        let v = v.as_f64().abs();
        if offending.is_none() {
            offending = Some(pair);
        }
        max_offdiag_abs = max_offdiag_abs.max(v);
    }
    OrthogonalityReport {
        is_diagonal: max_offdiag_abs == 0.0,
        diag: diag.into_iter().map(Scalar::as_f64).collect(),
        max_offdiag_abs,
        offending,
    }
}
