use crate::error::{Result, SosError};
use crate::poly::{MonomialBasis, MultiIndex};

/// 0/1 matrix marking the entries (β, γ) of v_d v_dᵀ that equal x^α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorMatrix {
    alpha: MultiIndex,
    entries: Vec<(usize, usize)>,
}

impl IndicatorMatrix {
    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    /// Positions (row β, column γ) into the basis, sorted by row.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Build B_α over `basis` by walking β and looking up γ = α − β.
///
/// An α outside the reach of the basis yields an empty indicator.
pub fn build_indicator(alpha: &MultiIndex, basis: &MonomialBasis) -> Result<IndicatorMatrix> {
    if alpha.num_vars() != basis.num_vars() {
        return Err(SosError::DimensionMismatch(format!(
            "multi-index in {} variables, basis in {}",
            alpha.num_vars(),
            basis.num_vars()
        )));
    }
    let mut entries = Vec::new();
    for (i, beta) in basis.entries().iter().enumerate() {
        if let Some(gamma) = alpha.checked_sub(beta) {
            if let Some(j) = basis.index_of(&gamma) {
                entries.push((i, j));
            }
        }
    }
    Ok(IndicatorMatrix {
        alpha: alpha.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::enumerate_basis;

    #[test]
    fn univariate_linear_basis() {
        let basis = enumerate_basis(1, 1).unwrap();
        let b1 = build_indicator(&MultiIndex::new(vec![1]), &basis).unwrap();
        assert_eq!(b1.entries(), &[(0, 1), (1, 0)]);
        assert_eq!(b1.nnz(), 2);
        let b0 = build_indicator(&MultiIndex::new(vec![0]), &basis).unwrap();
        assert_eq!(b0.entries(), &[(0, 0)]);
        let far = build_indicator(&MultiIndex::new(vec![3]), &basis).unwrap();
        assert!(far.is_empty());
    }

    #[test]
    fn symmetric_and_exact() {
        let basis = enumerate_basis(3, 2).unwrap();
        let big = enumerate_basis(3, 4).unwrap();
        let mut seen = std::collections::HashSet::new();
        for alpha in big.entries() {
            let ind = build_indicator(alpha, &basis).unwrap();
            assert!(!ind.is_empty());
            for &(i, j) in ind.entries() {
                assert!(ind.entries().contains(&(j, i)));
                assert_eq!(&basis.get(i).add(basis.get(j)).unwrap(), alpha);
                assert!(seen.insert((i, j)), "entry sets must be disjoint");
            }
        }
        assert_eq!(seen.len(), basis.len() * basis.len());
    }
}
