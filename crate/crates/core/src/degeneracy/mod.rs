//! Exact degeneracy tests relative to a subspace family, the relative norm,
//! and the operators certifying nondegeneracy: the apolar dual operator,
//! simple-nondegeneracy witnesses and finite difference schemes.

mod basis;
mod ideal;
mod operators;
mod scheme;

pub use basis::{
    degenerate_basis, homogeneous_generators, homogeneous_nondegeneracy_reduction, is_degenerate, reassemble,
    relative_norm, Degeneracy, DegeneracyContext, DegenerateBasis, Generator, Inner, Projection, Projector,
    RelativeNorm,
};
pub use ideal::verify_monomial_generators;
pub use operators::{check_witness, dual_annihilating_operator, simple_witness, DifferentialOperator};
pub use scheme::{apply_scheme, difference_scheme, Coupling, DifferenceScheme, Route, SchemeTerm};

use crate::polyalg::{Polynomial, SubspaceFamily};
use crate::rational::Q;

/// Everything the exact analysis can say about `P` relative to a family.
#[derive(Clone, Debug)]
pub struct NondegeneracyReport {
    pub degenerate: bool,
    pub relative_norm: f64,
    pub relative_norm_squared: Q,
    /// Best-fit `p_j` in frame coordinates; reconstruct `P` exactly when degenerate.
    pub minimizers: Vec<Polynomial>,
    /// Dual operator for the top nondegenerate homogeneous summand.
    pub dual_operator: Option<DifferentialOperator>,
    /// Degree of that summand.
    pub nondegenerate_degree: Option<u32>,
    pub simple_witness: Option<Vec<Vec<Q>>>,
}

pub fn analyze(p: &Polynomial, family: &SubspaceFamily) -> NondegeneracyReport {
    let fit = relative_norm(p, family);
    let degenerate = fit.residual.is_zero();
    let top = if degenerate { None } else { homogeneous_nondegeneracy_reduction(p, family) };
    let dual_operator = top
        .as_ref()
        .and_then(|(_, part)| dual_annihilating_operator(part, family).expect("homogeneous summand"));
    NondegeneracyReport {
        degenerate,
        relative_norm: fit.norm,
        relative_norm_squared: fit.norm_squared,
        minimizers: fit.minimizers,
        dual_operator,
        nondegenerate_degree: top.map(|(d, _)| d),
        simple_witness: simple_witness(p, family),
    }
}
