use crate::error::{Result, SosError};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Square matrix of polynomials, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<T: Scalar> {
    size: usize,
    entries: Vec<Polynomial<T>>,
}

impl<T: Scalar> PolyMatrix<T> {
    pub fn new(size: usize, entries: Vec<Polynomial<T>>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(SosError::DimensionMismatch(format!(
                "{} entries for a {size}x{size} polynomial matrix",
                entries.len()
            )));
        }
        Ok(PolyMatrix { size, entries })
    }

    pub fn scalar(p: Polynomial<T>) -> Self {
        PolyMatrix {
            size: 1,
            entries: vec![p],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<T> {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[Polynomial<T>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (i + 1..self.size).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Which SOS certificate a constraint asks for.
#[derive(Clone, Debug, PartialEq)]
pub enum SosKind<T: Scalar> {
    /// `g0 - Σ u_i g_i` is SOS.
    Scalar,
    /// `P0 - Σ u_h P_h` is an SOS matrix of the given block size.
    Matrix { block_size: usize },
    /// `g0 - Σ u_i g_i = s0 + Σ p_i s_i` with `s_i` SOS.
    Weighted { multipliers: Vec<Polynomial<T>> },
}

/// One SOS constraint, affine in the shared decision vector `u`.
///
/// Scalar and weighted constraints store their polynomials as 1x1 matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SosConstraintSpec<T: Scalar> {
    kind: SosKind<T>,
    g0: PolyMatrix<T>,
    g: Vec<PolyMatrix<T>>,
    degree_2d: u32,
}

impl<T: Scalar> SosConstraintSpec<T> {
    pub fn scalar(g0: Polynomial<T>, g: Vec<Polynomial<T>>, degree_2d: u32) -> Result<Self> {
        Self::build(
            SosKind::Scalar,
            PolyMatrix::scalar(g0),
            g.into_iter().map(PolyMatrix::scalar).collect(),
            degree_2d,
        )
    }

    pub fn matrix(p0: PolyMatrix<T>, p: Vec<PolyMatrix<T>>, degree_2d: u32) -> Result<Self> {
        let block_size = p0.size();
        Self::build(SosKind::Matrix { block_size }, p0, p, degree_2d)
    }

    pub fn weighted(
        g0: Polynomial<T>,
        g: Vec<Polynomial<T>>,
        multipliers: Vec<Polynomial<T>>,
        degree_2d: u32,
    ) -> Result<Self> {
        Self::build(
            SosKind::Weighted { multipliers },
            PolyMatrix::scalar(g0),
            g.into_iter().map(PolyMatrix::scalar).collect(),
            degree_2d,
        )
    }

    fn build(kind: SosKind<T>, g0: PolyMatrix<T>, g: Vec<PolyMatrix<T>>, degree_2d: u32) -> Result<Self> {
        let spec = SosConstraintSpec {
            kind,
            g0,
            g,
            degree_2d,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.degree_2d % 2 != 0 {
            return Err(SosError::InvalidSpec(format!(
                "SOS degree must be even, got {}",
                self.degree_2d
            )));
        }
        let n = self.num_vars();
        if n == 0 {
            return Err(SosError::InvalidSpec("polynomials need at least one variable".into()));
        }
        let r = self.g0.size();
        for (k, m) in std::iter::once(&self.g0).chain(&self.g).enumerate() {
            if m.size() != r {
                return Err(SosError::DimensionMismatch(format!(
                    "matrix {k} is {0}x{0}, expected {r}x{r}",
                    m.size()
                )));
            }
            if !m.is_symmetric() {
                return Err(SosError::InvalidSpec(format!("polynomial matrix {k} is not symmetric")));
            }
            for p in m.entries() {
                if p.num_vars() != n {
                    return Err(SosError::DimensionMismatch(format!(
                        "polynomial in {} variables, expected {n}",
                        p.num_vars()
                    )));
                }
                if p.degree() > self.degree_2d {
                    return Err(SosError::InvalidSpec(format!(
                        "polynomial of degree {} exceeds 2d = {}",
                        p.degree(),
                        self.degree_2d
                    )));
                }
            }
        }
        if let SosKind::Weighted { multipliers } = &self.kind {
            for p in multipliers {
                if p.num_vars() != n {
                    return Err(SosError::DimensionMismatch("multiplier variable count".into()));
                }
                if p.degree() > self.degree_2d {
                    return Err(SosError::InvalidSpec(format!(
                        "multiplier of degree {} exceeds 2d = {}",
                        p.degree(),
                        self.degree_2d
                    )));
                }
                if p.is_zero() {
                    return Err(SosError::InvalidSpec("zero multiplier".into()));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &SosKind<T> {
        &self.kind
    }

    pub fn g0(&self) -> &PolyMatrix<T> {
        &self.g0
    }

    pub fn g(&self) -> &[PolyMatrix<T>] {
        &self.g
    }

    /// Number of decision variables the constraint is affine in.
    pub fn num_decision_vars(&self) -> usize {
        self.g.len()
    }

    pub fn degree_2d(&self) -> u32 {
        self.degree_2d
    }

    /// Half degree `d` of the top Gram basis.
    pub fn half_degree(&self) -> u32 {
        self.degree_2d / 2
    }

    pub fn num_vars(&self) -> usize {
        self.g0.get(0, 0).num_vars()
    }

    pub fn block_size(&self) -> usize {
        self.g0.size()
    }

    /// Multiplier half-degrees ω_i = ⌊d − deg(p_i)/2⌋.
    pub fn multiplier_degrees(&self) -> Vec<u32> {
        match &self.kind {
            SosKind::Weighted { multipliers } => multipliers
                .iter()
                .map(|p| (self.degree_2d - p.degree()) / 2)
                .collect(),
            _ => Vec::new(),
        }
    }
}
