use num::Zero;

use super::basis::{homogeneous_generators, Inner, Projector};
use crate::error::{Error, Result};
use crate::polyalg::{monomials_of_degree, Polynomial, SubspaceFamily};
use crate::rational::Q;

/// Constant-coefficient differential operator identified with its symbol:
/// the symbol `sum s_alpha x^alpha` acts as `sum s_alpha d^alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialOperator {
    symbol: Polynomial,
}

impl DifferentialOperator {
    pub fn new(symbol: Polynomial) -> Self {
        DifferentialOperator { symbol }
    }

    pub fn symbol(&self) -> &Polynomial {
        &self.symbol
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.dimension(), self.symbol.dimension(), "operator and polynomial dimensions");
        self.symbol
            .terms()
            .fold(Polynomial::zero(p.dimension()), |acc, (alpha, c)| &acc + &p.derivative(alpha).scale(c))
    }

    /// Product of first-order operators `(w_1 . grad) ... (w_k . grad)`.
    pub fn from_directions(dim: usize, directions: &[Vec<Q>]) -> Self {
        let symbol = directions
            .iter()
            .fold(Polynomial::one(dim), |acc, w| &acc * &Polynomial::linear_form(w));
        DifferentialOperator { symbol }
    }
}

/// Operator homogeneous of degree `D = deg P` that kills every pullback of a
/// degree-`D` polynomial on every member, yet not `P`.
///
/// The symbol is the part of `P` apolar-orthogonal to the degenerate
/// homogeneous polynomials, so the operator applied to `P` is the constant
/// `<symbol, symbol>` which is positive. `None` when `P` is degenerate.
pub fn dual_annihilating_operator(p: &Polynomial, family: &SubspaceFamily) -> Result<Option<DifferentialOperator>> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if p.is_zero() {
        return Ok(None);
    }
    let d = p.degree() as u32;
    if family.is_empty() {
        return Ok((d > 0).then(|| DifferentialOperator::new(p.clone())));
    }
    let projector = Projector::new(
        family.ambient(),
        homogeneous_generators(family, d),
        monomials_of_degree(family.ambient(), d),
        Inner::Apolar,
    );
    let symbol = projector.project(p).residual;
    Ok((!symbol.is_zero()).then(|| DifferentialOperator::new(symbol)))
}

/// Directions `w_j` in `V_j^perp`, one per member, with
/// `prod_j (w_j . grad) P != 0`.
///
/// Writing each `w_j` in the complement basis with indeterminate
/// coefficients, `L(P)` is multilinear in the blocks of indeterminates and
/// every choice of one basis vector per block contributes a distinct
/// monomial. So `L(P)` vanishes identically iff every such choice
/// annihilates `P`, and a surviving choice is itself a witness (the 0/1
/// indicator point of the coefficient grid). The search is exhaustive and
/// deterministic; the first surviving choice in lexicographic order wins.
pub fn simple_witness(p: &Polynomial, family: &SubspaceFamily) -> Option<Vec<Vec<Q>>> {
    if family.is_empty() {
        return (!p.is_constant()).then(Vec::new);
    }
    if p.degree() < family.len() as i64 {
        return None;
    }
    let mut chosen = Vec::with_capacity(family.len());
    search(p, family, 0, &mut chosen)
}

fn search(q: &Polynomial, family: &SubspaceFamily, j: usize, chosen: &mut Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    if q.is_zero() {
        return None;
    }
    if j == family.len() {
        return Some(chosen.clone());
    }
    for w in family.get(j).complement() {
        let next = q.directional_derivative(w).expect("complement vectors live in the ambient space");
        chosen.push(w.clone());
        if let Some(found) = search(&next, family, j + 1, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Checks that a proposed witness is valid: `w_j` in `V_j^perp` and the
/// product of directional derivatives does not annihilate `P`.
pub fn check_witness(p: &Polynomial, family: &SubspaceFamily, witness: &[Vec<Q>]) -> bool {
    if witness.len() != family.len() {
        return false;
    }
    let orthogonal = witness
        .iter()
        .zip(family.subspaces())
        .all(|(w, v)| v.project(w).iter().all(Zero::is_zero));
    orthogonal && !DifferentialOperator::from_directions(p.dimension(), witness).apply(p).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::basis::homogeneous_generators;
    use crate::polyalg::Subspace;
    use crate::rational::q;

    fn poly(dim: usize, t: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_int_terms(dim, t)
    }

    fn r4_family() -> SubspaceFamily {
        SubspaceFamily::new(
            4,
            vec![
                Subspace::from_int_basis(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
                Subspace::from_int_basis(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap(),
                Subspace::from_int_basis(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dual_operator_for_x1x2() {
        let axes = SubspaceFamily::axes(2);
        let op = dual_annihilating_operator(&poly(2, &[(&[1, 1], 1)]), &axes).unwrap().unwrap();
        assert_eq!(op.symbol(), &poly(2, &[(&[1, 1], 1)]));
        assert_eq!(op.apply(&poly(2, &[(&[1, 1], 1)])), Polynomial::one(2));
    }

    #[test]
    fn dual_operator_for_r4_example() {
        let p = poly(4, &[(&[1, 0, 0, 1], 1), (&[0, 1, 1, 0], -1)]);
        let fam = r4_family();
        let op = dual_annihilating_operator(&p, &fam).unwrap().unwrap();
        assert_eq!(op.symbol(), &p);
        for g in homogeneous_generators(&fam, 2) {
            assert!(op.apply(&g.polynomial).is_zero(), "kills {}", g.polynomial);
        }
        assert_eq!(op.apply(&p), Polynomial::constant(4, q(2)));
    }

    #[test]
    fn dual_operator_none_and_errors() {
        let axes = SubspaceFamily::axes(2);
        assert_eq!(dual_annihilating_operator(&poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]), &axes).unwrap(), None);
        assert_eq!(
            dual_annihilating_operator(&poly(2, &[(&[2, 0], 1), (&[0, 1], 1)]), &axes),
            Err(Error::NotHomogeneous)
        );
    }

    #[test]
    fn witness_examples() {
        let axes = SubspaceFamily::axes(2);
        let w = simple_witness(&poly(2, &[(&[1, 1], 1)]), &axes).unwrap();
        assert_eq!(w, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert!(check_witness(&poly(2, &[(&[1, 1], 1)]), &axes, &w));
        assert_eq!(simple_witness(&poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]), &axes), None);
        let p = poly(4, &[(&[1, 0, 0, 1], 1), (&[0, 1, 1, 0], -1)]);
        assert_eq!(simple_witness(&p, &r4_family()), None);
    }

    #[test]
    fn empty_family_witness() {
        let e = SubspaceFamily::empty(1);
        assert_eq!(simple_witness(&poly(1, &[(&[2], 1)]), &e), Some(vec![]));
        assert_eq!(simple_witness(&Polynomial::constant(1, q(2)), &e), None);
    }
}
