//! Sparse multivariate polynomial algebra.

mod basis;
mod multi_index;
mod polynomial;
pub mod text;

pub use basis::{binomial, enumerate_basis, MonomialBasis};
pub use multi_index::MultiIndex;
pub use polynomial::Polynomial;
pub use text::{format_polynomial, parse_polynomial, AffinePolynomial};
