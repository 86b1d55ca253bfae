use serde::{Deserialize, Serialize};

use crate::admm::AffineMethod;

/// Per-iteration flop count of the normal-equation solve, ignoring sparsity
/// and counting an m×n matrix-vector product as 2mn flops.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlopEstimate {
    pub method: AffineMethod,
    pub flops_per_iteration: u128,
    /// The dense count is only an order of magnitude, `(m + t + N²)²`.
    pub asymptotic: bool,
    pub m: u64,
    pub t: u64,
    pub n: u64,
    pub n_cg: u64,
}

/// Flop estimates for the low-rank, dense direct and CG routes, in that order.
///
/// `n` is the order of the PSD block and `n_cg` the number of CG iterations.
pub fn flop_model(m: u64, t: u64, n: u64, n_cg: u64) -> [FlopEstimate; 3] {
    let (m128, t128, n2) = (m as u128, t as u128, (n as u128) * (n as u128));
    let low_rank = 2 * t128 * t128 + 4 * (n2 + 2 * t128) * m128 + 4 * m128 + t128 + n2;
    let dense = (m128 + t128 + n2) * (m128 + t128 + n2);
    let cg = 2 * m128 * (2 * t128 + 2 * n2 + m128 * n_cg as u128) + m128 + t128 + n2;
    let est = |method, flops, asymptotic| FlopEstimate {
        method,
        flops_per_iteration: flops,
        asymptotic,
        m,
        t,
        n,
        n_cg,
    };
    [
        est(AffineMethod::LowRank, low_rank, false),
        est(AffineMethod::DenseDirect, dense, true),
        est(AffineMethod::Cg, cg, false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let [low, _, _] = flop_model(1000, 66, 66, 1);
        assert_eq!(low.flops_per_iteration, 17_969_134);
        let [unit, _, _] = flop_model(1, 0, 1, 1);
        assert_eq!(unit.flops_per_iteration, 9);
    }

    #[test]
    fn low_rank_linear_in_m() {
        let fixed = |t: u128, n2: u128| 2 * t * t + t + n2;
        for &(m, t, n) in &[(100u64, 5u64, 4u64), (1000, 66, 66), (12345, 7, 30)] {
            let a = flop_model(m, t, n, 1)[0].flops_per_iteration;
            let b = flop_model(2 * m, t, n, 1)[0].flops_per_iteration;
            let f = fixed(t as u128, (n * n) as u128);
            assert_eq!(b - f, 2 * (a - f));
        }
    }

    #[test]
    fn dominance_matches_difference_of_closed_forms() {
        // LowRank − CG = 2t² + 4tm + 3m − 2m²n_cg.
        for m in [10u64, 100, 1_000, 10_000, 100_000] {
            for t in [1u64, 10, 66, 100] {
                for n in [1u64, 10, 66] {
                    for n_cg in [1u64, 2, 5, 50] {
                        let t = t.min(m);
                        let [low, _, cg] = flop_model(m, t, n, n_cg);
                        let (m, t, n_cg) = (m as i128, t as i128, n_cg as i128);
                        let diff = 2 * t * t + 4 * t * m + 3 * m - 2 * m * m * n_cg;
                        assert_eq!(low.flops_per_iteration as i128 - cg.flops_per_iteration as i128, diff);
                    }
                }
            }
        }
    }

    #[test]
    fn low_rank_below_cg_at_scale() {
        for m in [1_000u64, 10_000, 100_000] {
            for n_cg in [1u64, 2, 10, 100] {
                let [low, _, cg] = flop_model(m, 66, 66, n_cg);
                assert!(low.flops_per_iteration < cg.flops_per_iteration);
            }
        }
        // At m = 100 a single CG iteration is cheaper.
        let [low, _, cg] = flop_model(100, 66, 66, 1);
        assert_eq!((low.flops_per_iteration, cg.flops_per_iteration), (1_808_734, 1_793_322));
        let [low, _, cg] = flop_model(100, 66, 66, 2);
        assert!(low.flops_per_iteration < cg.flops_per_iteration);
    }
}
