//! Degeneracy of real polynomials relative to families of linear subspaces,
//! the operators that witness nondegeneracy, and numerical probes of the
//! analytic consequences: power decay of multilinear oscillatory integrals,
//! sublevel-set measures, and an oscillatory bilinear Hilbert transform.
//!
//! The algebraic side ([`polyalg`], [`degeneracy`]) is exact over the
//! rationals. The numeric side ([`oscillatory`], [`sublevel`], [`bilinear`])
//! is double precision, seeded, and reproducible across thread counts.

pub mod bilinear;
pub mod cli;
pub mod degeneracy;
pub mod error;
pub mod linalg;
pub mod numeric;
pub mod oscillatory;
pub mod polyalg;
pub mod rational;
pub mod sublevel;

pub use error::{Error, Result};
pub use polyalg::{Monomial, Polynomial, Subspace, SubspaceFamily};
pub use rational::Q;
