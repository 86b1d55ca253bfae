#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use nalgebra::DMatrix;
use sosadmm::assembly::{assemble_multi, Cone, ConicProblem, PolyMatrix, SosConstraintSpec};
use sosadmm::poly::{enumerate_basis, MultiIndex, Polynomial};
use sosadmm::sparse::CscMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial of degree ≤ `deg` with about `density` of the monomials present.
pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32, density: f64) -> Polynomial<f64> {
    let basis = enumerate_basis(n, deg).unwrap();
    let mut p = Polynomial::zero(n);
    for alpha in basis.entries() {
        if rng.gen_bool(density) {
            p.add_term(alpha.clone(), rng.gen_range(-2.0..2.0));
        }
    }
    p
}

pub fn random_scalar_spec(rng: &mut ChaCha8Rng, n: usize, two_d: u32, t: usize) -> SosConstraintSpec<f64> {
    let g0 = random_poly(rng, n, two_d, 0.6);
    let g = (0..t).map(|_| random_poly(rng, n, two_d, 0.3)).collect();
    SosConstraintSpec::scalar(g0, g, two_d).unwrap()
}

pub fn random_weighted_spec(rng: &mut ChaCha8Rng, n: usize, two_d: u32, t: usize) -> SosConstraintSpec<f64> {
    let g0 = random_poly(rng, n, two_d, 0.6);
    let g = (0..t).map(|_| random_poly(rng, n, two_d, 0.3)).collect();
    let mut p = random_poly(rng, n, 2, 0.5);
    if p.is_zero() {
        p = Polynomial::constant(n, 1.0);
    }
    SosConstraintSpec::weighted(g0, g, vec![p], two_d).unwrap()
}

pub fn random_matrix_spec(rng: &mut ChaCha8Rng, r: usize, n: usize, two_d: u32, t: usize) -> SosConstraintSpec<f64> {
    let sym = |rng: &mut ChaCha8Rng, density: f64| {
        let mut entries = vec![Polynomial::zero(n); r * r];
        for i in 0..r {
            for j in i..r {
                let p = random_poly(rng, n, two_d, density);
                entries[i * r + j] = p.clone();
                entries[j * r + i] = p;
            }
        }
        PolyMatrix::new(r, entries).unwrap()
    };
    let p0 = sym(rng, 0.6);
    let p = (0..t).map(|_| sym(rng, 0.3)).collect();
    SosConstraintSpec::matrix(p0, p, two_d).unwrap()
}

/// Random small problem mixing the scalar and weighted layouts.
pub fn random_problem(seed: u64) -> ConicProblem<f64> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let two_d = 2 * r.gen_range(1..=2u32);
    let t = r.gen_range(0..=5);
    let spec = if r.gen_bool(0.5) {
        random_scalar_spec(&mut r, n, two_d, t)
    } else {
        random_weighted_spec(&mut r, n, two_d, t)
    };
    let w: Vec<f64> = (0..t).map(|_| r.gen_range(-1.0..1.0)).collect();
    assemble_multi(&[spec], &w).unwrap()
}

pub fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Number of pairs (β, γ) in the degree-d basis with β + γ = α, by brute force.
pub fn pair_count(alpha: &MultiIndex, n: usize, d: u32) -> usize {
    let basis = enumerate_basis(n, d).unwrap();
    let mut count = 0;
    for b in basis.entries() {
        for g in basis.entries() {
            if b.exponents().iter().zip(g.exponents()).map(|(x, y)| x + y).eq(alpha.exponents().iter().copied()) {
                count += 1;
            }
        }
    }
    count
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(1e-300)
}

/// Problem whose orthogonal block is a column per row, so that `P = I + diag(d)`.
pub fn diag_plus_low_rank(seed: u64) -> (ConicProblem<f64>, DMatrix<f64>) {
    let mut r = rng(seed);
    let m = r.gen_range(1..=50);
    let t = r.gen_range(1..=8);
    let mut trip = Vec::new();
    for j in 0..t {
        for i in 0..m {
            trip.push((i, j, r.gen_range(-1.0..1.0)));
        }
    }
    for i in 0..m {
        trip.push((i, t + i, r.gen_range(0.1..3.0)));
    }
    let a = CscMatrix::from_triplets(m, t + m, &trip);
    let mut cones = vec![Cone::Free(t)];
    cones.extend(std::iter::repeat(Cone::Psd(1)).take(m));
    let p = ConicProblem::new(a, vec![0.0; m], vec![0.0; t + m], cones, t, vec![]).unwrap();
    let dense = p.a().to_dense();
    let full = DMatrix::identity(m, m) + &dense * dense.transpose();
    (p, full)
}
