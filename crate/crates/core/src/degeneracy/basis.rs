use std::collections::HashMap;

use num::{One, Zero};

use crate::linalg::Matrix;
use crate::polyalg::{monomials_of_degree, monomials_up_to, Monomial, Polynomial, SubspaceFamily};
use crate::rational::{self, Q};

/// Pullback of the monomial `u^alpha` on the canonical frame of `V_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub subspace: usize,
    pub monomial: Monomial,
    pub polynomial: Polynomial,
}

/// Spanning set of the degenerate polynomials of degree at most `degree`.
#[derive(Clone, Debug)]
pub struct DegenerateBasis {
    pub degree: u32,
    pub family: SubspaceFamily,
    pub generators: Vec<Generator>,
    pub rank: usize,
}

fn generators(family: &SubspaceFamily, monomials_on_v: impl Fn(usize) -> Vec<Monomial>) -> Vec<Generator> {
    let mut out = Vec::new();
    for (j, v) in family.subspaces().iter().enumerate() {
        for m in monomials_on_v(v.dimension()) {
            let p = Polynomial::term(v.dimension(), m.clone(), Q::one());
            let polynomial = v.pullback(&p).expect("monomial lives on V");
            out.push(Generator { subspace: j, monomial: m, polynomial });
        }
    }
    out
}

/// All pullbacks of monomials of degree `<= d` on each member, with the exact
/// rank of their span.
pub fn degenerate_basis(family: &SubspaceFamily, d: u32) -> DegenerateBasis {
    let generators = generators(family, |k| monomials_up_to(k, d));
    let rank = Projector::new(family.ambient(), generators.clone(), monomials_up_to(family.ambient(), d), Inner::Euclidean)
        .rank();
    DegenerateBasis { degree: d, family: family.clone(), generators, rank }
}

/// Pullbacks of monomials of degree exactly `d`; they span the degenerate
/// homogeneous polynomials of degree `d`.
pub fn homogeneous_generators(family: &SubspaceFamily, d: u32) -> Vec<Generator> {
    generators(family, |k| monomials_of_degree(k, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inner {
    /// Plain sum of products of monomial coefficients.
    Euclidean,
    /// Coefficients weighted by `alpha!`; pairs operators with polynomials.
    Apolar,
}

/// Exact orthogonal projection onto the span of a set of generators inside a
/// fixed monomial coordinate space.
#[derive(Clone, Debug)]
pub struct Projector {
    dim: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    generators: Vec<Generator>,
    pivots: Vec<usize>,
    independent: Matrix,
    solver: Matrix,
}

pub struct Projection {
    /// Coefficient of each generator (zero off the independent subset).
    pub coefficients: Vec<Q>,
    pub residual: Polynomial,
}

impl Projector {
    pub fn new(dim: usize, generators: Vec<Generator>, monomials: Vec<Monomial>, inner: Inner) -> Self {
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let columns: Vec<Vec<Q>> = generators.iter().map(|g| g.polynomial.coefficients_in(&monomials)).collect();
        let g = Matrix::from_columns(&columns, monomials.len());
        let pivots = if generators.is_empty() { Vec::new() } else { g.rref().1 };
        let independent = g.select_columns(&pivots);
        let mut weighted_t = independent.transpose();
        if inner == Inner::Apolar {
            for (i, m) in monomials.iter().enumerate() {
                let w = Q::from_integer(m.factorial());
                for r in 0..weighted_t.rows() {
                    let v = &weighted_t[(r, i)] * &w;
                    weighted_t[(r, i)] = v;
                }
            }
        }
        let solver = if pivots.is_empty() {
            Matrix::zeros(0, monomials.len())
        } else {
            let gram = weighted_t.mul(&independent);
            gram.inverse().expect("independent columns give an invertible Gram matrix").mul(&weighted_t)
        };
        Projector { dim, monomials, index, generators, pivots, independent, solver }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn covers(&self, p: &Polynomial) -> bool {
        p.terms().all(|(m, _)| self.index.contains_key(m))
    }

    pub fn project(&self, p: &Polynomial) -> Projection {
        assert!(self.covers(p), "polynomial outside the projector's monomial space");
        let v = p.coefficients_in(&self.monomials);
        let c = self.solver.mul_vec(&v);
        let fitted = self.independent.mul_vec(&c);
        let resid: Vec<Q> = v.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        let mut coefficients = vec![Q::zero(); self.generators.len()];
        for (k, &pivot) in self.pivots.iter().enumerate() {
            coefficients[pivot] = c[k].clone();
        }
        Projection { coefficients, residual: Polynomial::from_coefficients(self.dim, &self.monomials, &resid) }
    }

    /// Per-subspace polynomials (frame coordinates) assembled from generator coefficients.
    pub fn assemble(&self, family: &SubspaceFamily, coefficients: &[Q]) -> Vec<Polynomial> {
        let mut parts: Vec<Polynomial> =
            family.subspaces().iter().map(|v| Polynomial::zero(v.dimension())).collect();
        for (g, c) in self.generators.iter().zip(coefficients) {
            if !c.is_zero() {
                parts[g.subspace].add_term(g.monomial.clone(), c.clone());
            }
        }
        parts
    }
}

/// Outcome of the exact degeneracy test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// `P = sum_j pullback(p_j)`; the `p_j` are in frame coordinates of `V_j`.
    Degenerate(Vec<Polynomial>),
    Nondegenerate,
}

impl Degeneracy {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Degeneracy::Degenerate(_))
    }
}

/// Reusable exact test for a fixed family and degree bound.
#[derive(Clone, Debug)]
pub struct DegeneracyContext {
    family: SubspaceFamily,
    degree: u32,
    projector: Projector,
}

impl DegeneracyContext {
    pub fn new(family: &SubspaceFamily, degree: u32) -> Self {
        let generators = generators(family, |k| monomials_up_to(k, degree));
        let projector =
            Projector::new(family.ambient(), generators, monomials_up_to(family.ambient(), degree), Inner::Euclidean);
        DegeneracyContext { family: family.clone(), degree, projector }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn classify(&self, p: &Polynomial) -> Degeneracy {
        let fit = self.relative_norm(p);
        if fit.residual.is_zero() {
            Degeneracy::Degenerate(fit.minimizers)
        } else {
            Degeneracy::Nondegenerate
        }
    }

    pub fn relative_norm(&self, p: &Polynomial) -> RelativeNorm {
        assert!(p.degree() <= self.degree as i64, "polynomial degree exceeds the context");
        if self.family.is_empty() {
            // Only constants count as degenerate when there are no subspaces.
            let mut residual = p.clone();
            residual.add_term(Monomial::one(p.dimension()), -p.coefficient(&Monomial::one(p.dimension())));
            return RelativeNorm::new(residual, Vec::new());
        }
        let proj = self.projector.project(p);
        let minimizers = self.projector.assemble(&self.family, &proj.coefficients);
        RelativeNorm::new(proj.residual, minimizers)
    }
}

/// Distance from `P` to the degenerate polynomials of degree `<= deg P`, in
/// the Euclidean norm on graded-lex monomial coefficients.
#[derive(Clone, Debug)]
pub struct RelativeNorm {
    pub norm: f64,
    pub norm_squared: Q,
    /// Best-fit `p_j` in frame coordinates of each `V_j`.
    pub minimizers: Vec<Polynomial>,
    /// `P - sum_j pullback(p_j)`.
    pub residual: Polynomial,
}

impl RelativeNorm {
    fn new(residual: Polynomial, minimizers: Vec<Polynomial>) -> Self {
        let norm_squared = residual.coefficient_norm_squared();
        RelativeNorm { norm: rational::to_f64(&norm_squared).sqrt(), norm_squared, minimizers, residual }
    }
}

fn context_for(p: &Polynomial, family: &SubspaceFamily) -> DegeneracyContext {
    DegeneracyContext::new(family, p.degree().max(0) as u32)
}

/// Exact test whether `P` is a sum of pullbacks of polynomials on the members.
///
/// With an empty family, exactly the constants are degenerate.
pub fn is_degenerate(p: &Polynomial, family: &SubspaceFamily) -> Degeneracy {
    context_for(p, family).classify(p)
}

pub fn relative_norm(p: &Polynomial, family: &SubspaceFamily) -> RelativeNorm {
    context_for(p, family).relative_norm(p)
}

/// Sum of pullbacks of per-subspace polynomials.
pub fn reassemble(family: &SubspaceFamily, parts: &[Polynomial]) -> Polynomial {
    parts.iter().zip(family.subspaces()).fold(Polynomial::zero(family.ambient()), |acc, (p, v)| {
        &acc + &v.pullback(p).expect("part lives on its subspace")
    })
}

/// Highest-degree homogeneous summand of `P` that is nondegenerate.
pub fn homogeneous_nondegeneracy_reduction(p: &Polynomial, family: &SubspaceFamily) -> Option<(u32, Polynomial)> {
    p.homogeneous_parts().into_iter().rev().find(|(d, part)| !is_degenerate_homogeneous(part, family, *d))
}

pub(crate) fn is_degenerate_homogeneous(part: &Polynomial, family: &SubspaceFamily, d: u32) -> bool {
    if family.is_empty() {
        return d == 0 || part.is_zero();
    }
    let projector = Projector::new(
        family.ambient(),
        homogeneous_generators(family, d),
        monomials_of_degree(family.ambient(), d),
        Inner::Euclidean,
    );
    projector.project(part).residual.is_zero()
}
