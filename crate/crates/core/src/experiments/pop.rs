use crate::assembly::{assemble_weighted, ConicProblem, SosConstraintSpec};
use crate::error::{Result, SosError};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::Scalar;

/// A generated instance: the constraints, the objective weights `w` of
/// `min wᵀu`, and the sign turning the conic objective into the model value.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedProblem<T: Scalar> {
    pub specs: Vec<SosConstraintSpec<T>>,
    pub w: Vec<T>,
    /// `model objective = objective_sign · cᵀξ + objective_offset`.
    pub objective_sign: T,
    pub objective_offset: T,
}

impl<T: Scalar> GeneratedProblem<T> {
    pub fn model_objective(&self, conic_objective: T) -> T {
        self.objective_sign * conic_objective + self.objective_offset
    }
}

impl<T: Scalar> GeneratedProblem<T> {
    pub fn assemble(&self) -> Result<ConicProblem<T>> {
        crate::assembly::assemble_multi(&self.specs, &self.w)
    }
}

/// `Σ_{i<j} (xᵢxⱼ + xᵢ²xⱼ − xⱼ³ − xᵢ²xⱼ²)`.
pub fn pop_objective<T: Scalar>(n: usize) -> Result<Polynomial<T>> {
    if n < 2 {
        return Err(SosError::InvalidSpec(format!("the quartic test problem needs n >= 2, got {n}")));
    }
    let mono = |pairs: &[(usize, u32)]| {
        let mut e = vec![0u32; n];
        for &(i, k) in pairs {
            e[i] += k;
        }
        MultiIndex::new(e)
    };
    let mut p = Polynomial::zero(n);
    for j in 0..n {
        for i in 0..j {
            p.add_term(mono(&[(i, 1), (j, 1)]), T::one());
            p.add_term(mono(&[(i, 2), (j, 1)]), T::one());
            p.add_term(mono(&[(j, 3)]), -T::one());
            p.add_term(mono(&[(i, 2), (j, 2)]), -T::one());
        }
    }
    Ok(p)
}

/// The order-4 relaxation of minimizing [`pop_objective`] over the unit ball:
/// maximize `γ` such that `p − γ = s₀ + (1 − Σxᵢ²)s₁` with `s₀, s₁` SOS.
/// Posed as `min −γ`, so the bound is `−cᵀξ`.
pub fn gen_pop<T: Scalar>(n: usize) -> Result<GeneratedProblem<T>> {
    let p0 = pop_objective(n)?;
    let mut ball = Polynomial::constant(n, T::one());
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 2;
        ball.add_term(MultiIndex::new(e), -T::one());
    }
    let spec = SosConstraintSpec::weighted(p0, vec![Polynomial::constant(n, T::one())], vec![ball], 4)?;
    Ok(GeneratedProblem {
        specs: vec![spec],
        w: vec![-T::one()],
        objective_sign: -T::one(),
        objective_offset: T::zero(),
    })
}

/// Assemble the relaxation from [`gen_pop`] directly.
pub fn assemble_pop<T: Scalar>(n: usize) -> Result<ConicProblem<T>> {
    let g = gen_pop::<T>(n)?;
    assemble_weighted(&g.specs[0], &g.w)
}
