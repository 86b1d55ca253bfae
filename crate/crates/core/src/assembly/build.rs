use std::collections::HashMap;

use log::warn;

use crate::assembly::indicator::build_indicator;
use crate::assembly::problem::{Cone, ConicProblem, RowLabel};
use crate::assembly::spec::{SosConstraintSpec, SosKind};
use crate::error::{Result, SosError};
use crate::poly::{enumerate_basis, MonomialBasis, Polynomial};
use crate::scalar::Scalar;
use crate::sparse::CscMatrix;

/// Assemble a single scalar SOS constraint `g0 − Σ uᵢgᵢ ∈ Σ[x]_{n,2d}`.
pub fn assemble_scalar<T: Scalar>(spec: &SosConstraintSpec<T>, w: &[T]) -> Result<ConicProblem<T>> {
    if !matches!(spec.kind(), SosKind::Scalar) {
        return Err(SosError::InvalidSpec("assemble_scalar needs a scalar constraint".into()));
    }
    assemble_multi(std::slice::from_ref(spec), w)
}

/// Assemble a matrix-valued SOS constraint.
pub fn assemble_matrix<T: Scalar>(spec: &SosConstraintSpec<T>, w: &[T]) -> Result<ConicProblem<T>> {
    if !matches!(spec.kind(), SosKind::Matrix { .. }) {
        return Err(SosError::InvalidSpec("assemble_matrix needs a matrix constraint".into()));
    }
    assemble_multi(std::slice::from_ref(spec), w)
}

/// Assemble a weighted SOS constraint `g = s0 + Σ pᵢsᵢ`. The multiplier Gram
/// blocks come first and join `u` in the low-rank block; the top-degree Gram
/// block comes last and is the orthogonal one.
pub fn assemble_weighted<T: Scalar>(spec: &SosConstraintSpec<T>, w: &[T]) -> Result<ConicProblem<T>> {
    if !matches!(spec.kind(), SosKind::Weighted { .. }) {
        return Err(SosError::InvalidSpec("assemble_weighted needs a weighted constraint".into()));
    }
    assemble_multi(std::slice::from_ref(spec), w)
}

struct MultiplierPlan<'a, T: Scalar> {
    poly: &'a Polynomial<T>,
    basis: MonomialBasis,
    col: usize,
}

struct BlockPlan<'a, T: Scalar> {
    spec: &'a SosConstraintSpec<T>,
    gram_basis: MonomialBasis,
    row_basis: MonomialBasis,
    pairs: Vec<(usize, usize)>,
    row_offset: usize,
    orth_col: usize,
    multipliers: Vec<MultiplierPlan<'a, T>>,
}

impl<T: Scalar> BlockPlan<'_, T> {
    fn gram_order(&self) -> usize {
        self.gram_basis.len() * self.spec.block_size()
    }

    fn num_rows(&self) -> usize {
        self.row_basis.len() * self.pairs.len()
    }
}

/// Assemble several SOS constraints sharing the decision vector `u` (length
/// `w.len()`) into one conic program. Each constraint contributes its own
/// block of equality rows and its own PSD cones.
pub fn assemble_multi<T: Scalar>(specs: &[SosConstraintSpec<T>], w: &[T]) -> Result<ConicProblem<T>> {
    let first = specs
        .first()
        .ok_or_else(|| SosError::InvalidSpec("no SOS constraints to assemble".into()))?;
    let n = first.num_vars();
    let t = w.len();
    for (k, s) in specs.iter().enumerate() {
        if s.num_vars() != n {
            return Err(SosError::DimensionMismatch(format!(
                "constraint {k} has {} variables, expected {n}",
                s.num_vars()
            )));
        }
        if s.num_decision_vars() != t {
            return Err(SosError::DimensionMismatch(format!(
                "constraint {k} is affine in {} decision variables, objective has {t}",
                s.num_decision_vars()
            )));
        }
    }

    let mut bases: HashMap<u32, MonomialBasis> = HashMap::new();
    let mut basis = |d: u32| -> Result<MonomialBasis> {
        if let Some(b) = bases.get(&d) {
            return Ok(b.clone());
        }
        let b = enumerate_basis(n, d)?;
        bases.insert(d, b.clone());
        Ok(b)
    };

    let mut plans = Vec::with_capacity(specs.len());
    let mut row_offset = 0;
    let mut low_col = t;
    for spec in specs {
        let r = spec.block_size();
        let pairs: Vec<_> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        let mut multipliers = Vec::new();
        if let SosKind::Weighted { multipliers: polys } = spec.kind() {
            for (poly, omega) in polys.iter().zip(spec.multiplier_degrees()) {
                let b = basis(omega)?;
                let width = b.len() * b.len();
                multipliers.push(MultiplierPlan {
                    poly,
                    basis: b,
                    col: low_col,
                });
                low_col += width;
            }
        }
        let plan = BlockPlan {
            spec,
            gram_basis: basis(spec.half_degree())?,
            row_basis: basis(spec.degree_2d())?,
            pairs,
            row_offset,
            orth_col: 0,
            multipliers,
        };
        row_offset += plan.num_rows();
        plans.push(plan);
    }
    let lowrank_width = low_col;
    let mut orth_col = lowrank_width;
    for plan in &mut plans {
        plan.orth_col = orth_col;
        orth_col += plan.gram_order() * plan.gram_order();
    }
    let m = row_offset;
    let ncols = orth_col;

    let mut triplets: Vec<(usize, usize, T)> = Vec::new();
    let mut b = vec![T::zero(); m];
    let mut rows = Vec::with_capacity(m);
    let mut warnings = Vec::new();
    let two = T::of(2.0);

    for (block, plan) in plans.iter().enumerate() {
        let nb = plan.gram_basis.len();
        let l = plan.gram_order();
        for (ai, alpha) in plan.row_basis.entries().iter().enumerate() {
            let indicator = build_indicator(alpha, &plan.gram_basis)?;
            for (pi, &(i, j)) in plan.pairs.iter().enumerate() {
                let row = plan.row_offset + ai * plan.pairs.len() + pi;
                // Off-diagonal entries touch both Y_ij and Y_ji, so the row
                // stands for 2·(C_α)_ij.
                let scale = if i == j { T::one() } else { two };
                b[row] = scale * plan.spec.g0().get(i, j).coeff(alpha);
                for (h, gh) in plan.spec.g().iter().enumerate() {
                    let v = gh.get(i, j).coeff(alpha);
                    if v != T::zero() {
                        triplets.push((row, h, scale * v));
                    }
                }
                for &(p, q) in indicator.entries() {
                    let (rr, cc) = (i * nb + p, j * nb + q);
                    triplets.push((row, plan.orth_col + rr + cc * l, T::one()));
                    if i != j {
                        triplets.push((row, plan.orth_col + cc + rr * l, T::one()));
                    }
                }
                if indicator.is_empty() && b[row] != T::zero() && plan.multipliers.is_empty() {
                    let msg = format!(
                        "constraint {block}: monomial {alpha} has no Gram entry but a nonzero coefficient; the problem is infeasible"
                    );
                    warn!("{msg}");
                    warnings.push(msg);
                }
                rows.push(RowLabel {
                    block,
                    monomial: alpha.clone(),
                    entry: (plan.pairs.len() > 1).then_some((i, j)),
                });
            }
        }

        for mp in &plan.multipliers {
            let nm = mp.basis.len();
            for (p, beta) in mp.basis.entries().iter().enumerate() {
                for (q, gamma) in mp.basis.entries().iter().enumerate() {
                    let bg = beta.add(gamma)?;
                    for (delta, &coef) in mp.poly.terms() {
                        let alpha = bg.add(delta)?;
                        let ai = plan.row_basis.index_of(&alpha).ok_or_else(|| {
                            SosError::InvalidSpec(format!("multiplier product reaches degree {}", alpha.degree()))
                        })?;
                        triplets.push((plan.row_offset + ai, mp.col + p + q * nm, coef));
                    }
                }
            }
        }
    }

    let mut cones = vec![Cone::Free(t)];
    for plan in &plans {
        cones.extend(plan.multipliers.iter().map(|mp| Cone::Psd(mp.basis.len())));
    }
    cones.extend(plans.iter().map(|p| Cone::Psd(p.gram_order())));

    if lowrank_width > t && lowrank_width >= m {
        let msg = format!(
            "low-rank width {lowrank_width} is not below the row count {m}; the low-rank affine solve gains nothing"
        );
        warn!("{msg}");
        warnings.push(msg);
    }

    let a = CscMatrix::from_triplets(m, ncols, &triplets);
    let mut c = vec![T::zero(); ncols];
    c[..t].copy_from_slice(w);
    Ok(ConicProblem::new(a, b, c, cones, lowrank_width, rows)?.with_warnings(warnings))
}
