use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::SosConstraintSpec;
use crate::error::{Result, SosError};
use crate::experiments::pop::GeneratedProblem;
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::Scalar;

/// Radius² of the ball on which stability is certified.
pub const BALL_RADIUS_SQ: f64 = 0.1;
/// Margin in `V − ε xᵀx`, making positivity strict away from the origin. Both
/// conditions are homogeneous in `Q`, so any ε > 0 gives the same certificates
/// up to scaling; a unit margin keeps the zero function far outside the
/// solver tolerance.
pub const POSITIVITY_MARGIN: f64 = 1.0;
/// Default size of the cubic coefficients, divided by `n`.
pub const DEFAULT_CUBIC_SCALE: f64 = 0.5;

/// A polynomial vector field `ẋ = f(x)` with `f(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T: Scalar> {
    pub components: Vec<Polynomial<T>>,
}

impl<T: Scalar> VectorField<T> {
    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|p| p.eval_f64(x)).collect()
    }
}

fn quadratic(n: usize, i: usize, j: usize) -> MultiIndex {
    let mut e = vec![0u32; n];
    e[i] += 1;
    e[j] += 1;
    MultiIndex::new(e)
}

/// `f(x) = Hx + cubic` where `cubic[i]` is added to component `i`.
pub fn field_from_parts<T: Scalar>(h: &DMatrix<f64>, cubic: Option<&[Polynomial<T>]>) -> Result<VectorField<T>> {
    let n = h.nrows();
    if n < 2 || h.ncols() != n {
        return Err(SosError::DimensionMismatch(format!(
            "linear part must be square with n >= 2, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = Polynomial::zero(n);
        for j in 0..n {
            let mut e = vec![0u32; n];
            e[j] = 1;
            p.add_term(MultiIndex::new(e), T::of(h[(i, j)]));
        }
        if let Some(c) = cubic {
            let extra = c.get(i).ok_or_else(|| SosError::DimensionMismatch("cubic part too short".into()))?;
            p = p.add(extra)?;
        }
        components.push(p);
    }
    Ok(VectorField { components })
}

/// Largest real part of the eigenvalues of `h`.
pub fn spectral_abscissa(h: &DMatrix<f64>) -> f64 {
    h.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Random cubic system with a linearly stable origin. Entries of `H` are
/// uniform on [−1, 1], then `H ← H − (μ + 0.5)I` with μ the spectral
/// abscissa. Each component gets `n` random cubic monomials with coefficients
/// uniform on `[−cubic_scale/n, cubic_scale/n]`.
pub fn random_field<T: Scalar>(n: usize, seed: u64, cubic_scale: f64) -> Result<VectorField<T>> {
    if n < 2 {
        return Err(SosError::InvalidSpec(format!("Lyapunov instances need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0));
    let mu = spectral_abscissa(&h);
    for i in 0..n {
        h[(i, i)] -= mu + 0.5;
    }
    let amp = cubic_scale / n as f64;
    let mut cubic = Vec::with_capacity(n);
    for _ in 0..n {
        let mut p = Polynomial::zero(n);
        for _ in 0..n {
            let mut e = vec![0u32; n];
            for _ in 0..3 {
                e[rng.gen_range(0..n)] += 1;
            }
            p.add_term(MultiIndex::new(e), T::of(amp * rng.gen_range(-1.0..=1.0)));
        }
        cubic.push(p);
    }
    field_from_parts(&h, Some(&cubic))
}

/// The upper-triangle pairs `(i, j)`, `i ≤ j`, indexing the decision vector.
pub fn q_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// SOS conditions for a quadratic `V = xᵀQx` on the ball `Σxᵢ² ≤ 0.1`:
///
/// ```text
/// V − ε xᵀx = s₀ + (0.1 − xᵀx) s₁           (degree 2)
/// −∇V·f     = s₂ + (0.1 − xᵀx) s₃           (degree 4)
/// ```
///
/// The decision vector lists the upper triangle of `Q` row by row, see
/// [`q_pairs`]. The objective is zero (pure feasibility).
pub fn lyapunov_program<T: Scalar>(field: &VectorField<T>) -> Result<GeneratedProblem<T>> {
    let n = field.num_vars();
    let pairs = q_pairs(n);
    let mut xtx = Polynomial::zero(n);
    for i in 0..n {
        xtx.add_term(quadratic(n, i, i), T::one());
    }
    let ball = Polynomial::constant(n, T::of(BALL_RADIUS_SQ)).sub(&xtx)?;

    // V = Σ u_k q_k with q_k = x_i² or 2 x_i x_j.
    let basis_v: Vec<Polynomial<T>> = pairs
        .iter()
        .map(|&(i, j)| {
            let c = if i == j { T::one() } else { T::of(2.0) };
            Polynomial::monomial(quadratic(n, i, j), c)
        })
        .collect();

    let positivity = SosConstraintSpec::weighted(
        xtx.scale(-T::of(POSITIVITY_MARGIN)),
        basis_v.iter().map(Polynomial::neg).collect(),
        vec![ball.clone()],
        2,
    )?;
    let decrease_terms = basis_v
        .iter()
        .map(|q| q.lie_derivative(&field.components))
        .collect::<Result<Vec<_>>>()?;
    let decrease = SosConstraintSpec::weighted(Polynomial::zero(n), decrease_terms, vec![ball], 4)?;
    Ok(GeneratedProblem {
        specs: vec![positivity, decrease],
        w: vec![T::zero(); pairs.len()],
        objective_sign: T::one(),
        objective_offset: T::zero(),
    })
}

pub fn gen_lyapunov<T: Scalar>(n: usize, seed: u64) -> Result<GeneratedProblem<T>> {
    lyapunov_program(&random_field::<T>(n, seed, DEFAULT_CUBIC_SCALE)?)
}

/// Symmetric `Q` from the decision part of a solution.
pub fn q_from_decision<T: Scalar>(n: usize, u: &[T]) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(n, n);
    for (&(i, j), &v) in q_pairs(n).iter().zip(u) {
        q[(i, j)] = v.as_f64();
        q[(j, i)] = v.as_f64();
    }
    q
}

/// Numerical check of a candidate `V = xᵀQx` against the field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovCheck {
    pub min_eig_q: f64,
    /// Largest `∇V·f / ‖x‖²` over the sampled ball points (≤ 0 is good).
    pub max_increase: f64,
}

impl LyapunovCheck {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.min_eig_q > 0.0 && self.max_increase <= tol
    }
}

pub fn check_lyapunov<T: Scalar>(field: &VectorField<T>, q: &DMatrix<f64>, samples: usize, seed: u64) -> LyapunovCheck {
    let n = field.num_vars();
    let sym = (q + q.transpose()) * 0.5;
    let min_eig_q = sym.symmetric_eigenvalues().min();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_increase = f64::NEG_INFINITY;
    for _ in 0..samples {
        let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let r = BALL_RADIUS_SQ.sqrt() * rng.gen_range(0.05..=1.0f64);
        let x: Vec<f64> = dir.iter().map(|v| v * r / norm).collect();
        let f = field.eval_f64(&x);
        let grad = &sym * nalgebra::DVector::from_column_slice(&x) * 2.0;
        let vdot: f64 = grad.iter().zip(&f).map(|(g, fi)| g * fi).sum();
        max_increase = max_increase.max(vdot / (r * r));
    }
    LyapunovCheck { min_eig_q, max_increase }
}
