use std::collections::HashMap;

use crate::error::{Result, SosError};
use crate::poly::MultiIndex;

/// `binomial(n, k)` with overflow detection.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    usize::try_from(acc).ok()
}

/// All multi-indices of total degree at most `d` in `n` variables, in graded-lex order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    num_vars: usize,
    degree_bound: u32,
    entries: Vec<MultiIndex>,
    index_of: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.entries[i]
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index_of.get(alpha).copied()
    }
}

/// Enumerate ℕⁿ_d in graded-lex order.
pub fn enumerate_basis(n: usize, d: u32) -> Result<MonomialBasis> {
    if n == 0 {
        return Err(SosError::InvalidSpec(
            "monomial basis needs at least one variable".into(),
        ));
    }
    let count = binomial(n + d as usize, d as usize).ok_or_else(|| {
        SosError::Capacity(format!("binomial({}, {d}) overflows", n + d as usize))
    })?;
    // Each entry stores n exponents; refuse sizes we could never allocate.
    if count.checked_mul(n * 4 + 64).is_none_or(|b| b > isize::MAX as usize) {
        return Err(SosError::Capacity(format!(
            "monomial basis with {count} entries is not addressable"
        )));
    }

    let mut entries = Vec::with_capacity(count);
    let mut scratch = vec![0u32; n];
    for k in 0..=d {
        fill_degree(&mut scratch, 0, k, &mut entries);
    }
    debug_assert_eq!(entries.len(), count);
    let index_of = entries
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    Ok(MonomialBasis {
        num_vars: n,
        degree_bound: d,
        entries,
        index_of,
    })
}

// Exponent vectors of exact degree `remaining` over positions pos.., with
// larger leading exponents first.
fn fill_degree(scratch: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(MultiIndex::new(scratch.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        scratch[pos] = e;
        fill_degree(scratch, pos + 1, remaining - e, out);
    }
    scratch[pos] = 0;
}
