//! Exact multivariate polynomials, subspaces with their orthogonal
//! projections, and pullbacks of polynomials along those projections.

mod json;
mod monomial;
mod polynomial;
mod subspace;

pub use json::{vector_from_json, vector_to_json, PolynomialJson, SubspaceJson, TermJson};
pub use monomial::{monomials_of_degree, monomials_up_to, Monomial};
pub use polynomial::{FloatPolynomial, Polynomial};
pub use subspace::{pullback, Subspace, SubspaceFamily};

use crate::error::Result;
use crate::rational::Q;

/// Exact value of `P` at `x`.
pub fn evaluate(p: &Polynomial, x: &[Q]) -> Result<Q> {
    p.evaluate(x)
}

pub fn directional_derivative(p: &Polynomial, w: &[Q]) -> Result<Polynomial> {
    p.directional_derivative(w)
}

pub fn homogeneous_parts(p: &Polynomial) -> Vec<(u32, Polynomial)> {
    p.homogeneous_parts()
}

pub fn general_position(family: &SubspaceFamily) -> Result<bool> {
    family.general_position()
}
