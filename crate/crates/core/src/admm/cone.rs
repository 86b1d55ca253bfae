use nalgebra::DMatrix;

use crate::assembly::{Cone, ConicProblem};
use crate::error::{Result, SosError};
use crate::scalar::Scalar;

/// Project a column-stacked N×N block onto the PSD cone in place:
/// symmetrize, eigendecompose, clamp negative eigenvalues.
pub fn project_psd_block<T: Scalar>(block: &mut [T], n: usize) -> Result<()> {
    debug_assert_eq!(block.len(), n * n);
    if n == 0 {
        return Ok(());
    }
    if block.iter().any(|v| !v.is_finite_value()) {
        return Err(SosError::Numeric("non-finite entry in PSD block".into()));
    }
    if n == 1 {
        block[0] = block[0].max(T::zero());
        return Ok(());
    }
    let half = T::of(0.5);
    let mut x = DMatrix::from_column_slice(n, n, block);
    for j in 0..n {
        for i in 0..j {
            let s = (x[(i, j)] + x[(j, i)]) * half;
            x[(i, j)] = s;
            x[(j, i)] = s;
        }
    }
    let eig = x.clone().symmetric_eigen();
    let neg: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] < T::zero()).collect();
    if neg.is_empty() {
        block.copy_from_slice(x.as_slice());
        return Ok(());
    }
    let out = if 2 * neg.len() <= n {
        // X⁺ = X − Σ_{λ<0} λ v vᵀ
        let mut out = x;
        for &k in &neg {
            let v = eig.eigenvectors.column(k);
            out.ger(-eig.eigenvalues[k], &v, &v, T::one());
        }
        out
    } else {
        let mut out = DMatrix::zeros(n, n);
        for k in (0..n).filter(|&k| eig.eigenvalues[k] > T::zero()) {
            let v = eig.eigenvectors.column(k);
            out.ger(eig.eigenvalues[k], &v, &v, T::one());
        }
        out
    };
    // Keep the result exactly symmetric.
    for j in 0..n {
        for i in 0..j {
            let s = (out[(i, j)] + out[(j, i)]) * half;
            block[i + j * n] = s;
            block[j + i * n] = s;
        }
        block[j + j * n] = out[(j, j)];
    }
    Ok(())
}

/// Project ξ onto 𝒦 in place.
pub fn project_onto_k<T: Scalar>(xi: &mut [T], cones: &[Cone]) -> Result<()> {
    let mut off = 0;
    for &k in cones {
        let d = k.dim();
        if let Cone::Psd(n) = k {
            project_psd_block(&mut xi[off..off + d], n)?;
        }
        off += d;
    }
    Ok(())
}

/// Project a full embedding vector `(ξ, y, τ)` onto 𝒞 = 𝒦 × ℝᵐ × ℝ₊.
pub fn project_cone<T: Scalar>(point: &[T], problem: &ConicProblem<T>) -> Result<Vec<T>> {
    let mut out = point.to_vec();
    project_cone_in_place(&mut out, problem)?;
    Ok(out)
}

pub(crate) fn project_cone_in_place<T: Scalar>(point: &mut [T], problem: &ConicProblem<T>) -> Result<()> {
    if point.len() != problem.hsde_dim() {
        return Err(SosError::DimensionMismatch(format!(
            "embedding vector has length {}, expected {}",
            point.len(),
            problem.hsde_dim()
        )));
    }
    project_onto_k(&mut point[..problem.num_cols()], problem.cones())?;
    let last = point.len() - 1;
    point[last] = point[last].max(T::zero());
    Ok(())
}

/// Euclidean distance from `z` to the dual cone 𝒦* = {0}ᵗ × 𝕊₊.
pub fn dist_to_dual_cone<T: Scalar>(z: &[T], cones: &[Cone]) -> Result<T> {
    let mut sq = T::zero();
    let mut off = 0;
    for &k in cones {
        let d = k.dim();
        let part = &z[off..off + d];
        match k {
            Cone::Free(_) => sq += part.iter().fold(T::zero(), |a, &v| a + v * v),
            Cone::Psd(n) => {
                let mut proj = part.to_vec();
                project_psd_block(&mut proj, n)?;
                sq += part
                    .iter()
                    .zip(&proj)
                    .fold(T::zero(), |a, (&p, &q)| a + (p - q) * (p - q));
            }
        }
        off += d;
    }
    Ok(sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_negative_eigenvalue() {
        let mut b = vec![1.0, 0.0, 0.0, -2.0];
        project_psd_block(&mut b, 2).unwrap();
        assert_eq!(b, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn psd_input_unchanged() {
        let orig = vec![2.0f64, 1.0, 1.0, 2.0];
        let mut b = orig.clone();
        project_psd_block(&mut b, 2).unwrap();
        for (x, y) in b.iter().zip(&orig) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut b = vec![f64::NAN, 0.0, 0.0, 1.0];
        assert!(project_psd_block(&mut b, 2).is_err());
    }

    #[test]
    fn dual_cone_distance() {
        let cones = [Cone::Free(1), Cone::Psd(2)];
        let z = [3.0f64, 1.0, 0.0, 0.0, -4.0];
        assert!((dist_to_dual_cone(&z, &cones).unwrap() - 5.0).abs() < 1e-12);
    }
}
