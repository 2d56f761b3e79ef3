use num::Zero;

use crate::error::{Error, Result};
use crate::polyalg::{Polynomial, SubspaceFamily};
use crate::rational::{self, Q};

/// Checks that every product `prod_j y_{j,k(j)}`, taking one linear form per
/// member, vanishes identically on the union of the members.
///
/// `forms[j]` holds coefficient vectors of linear forms that must vanish on
/// `V_j`; a form that does not is reported as an error.
pub fn verify_monomial_generators(family: &SubspaceFamily, forms: &[Vec<Vec<Q>>]) -> Result<bool> {
    if forms.len() != family.len() {
        return Err(Error::DimensionMismatch { expected: family.len(), found: forms.len() });
    }
    let m = family.ambient();
    for (j, (v, list)) in family.subspaces().iter().zip(forms).enumerate() {
        for (k, y) in list.iter().enumerate() {
            if y.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: y.len() });
            }
            if v.basis().iter().any(|b| !rational::dot(y, b).is_zero()) {
                return Err(Error::FormDoesNotVanish { subspace: j, form: k });
            }
        }
    }
    if forms.iter().any(Vec::is_empty) {
        return Ok(true);
    }
    let linear: Vec<Vec<Polynomial>> =
        forms.iter().map(|list| list.iter().map(|y| Polynomial::linear_form(y)).collect()).collect();
    let mut choice = vec![0usize; forms.len()];
    loop {
        let product = linear.iter().zip(&choice).fold(Polynomial::one(m), |acc, (l, &k)| &acc * &l[k]);
        for v in family.subspaces() {
            // Restrict to V through its canonical frame: x = sum_i u_i f_i.
            let frame: Vec<Polynomial> = (0..m)
                .map(|row| {
                    let coeffs: Vec<Q> = v.frame().iter().map(|f| f[row].clone()).collect();
                    Polynomial::linear_form(&coeffs)
                })
                .collect();
            if !product.substitute(&frame)?.is_zero() {
                return Ok(false);
            }
        }
        let mut j = 0;
        loop {
            if j == choice.len() {
                return Ok(true);
            }
            choice[j] += 1;
            if choice[j] < forms[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Subspace;
    use crate::rational::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn r4_products_vanish() {
        let fam = SubspaceFamily::new(
            4,
            vec![
                Subspace::from_int_basis(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
                Subspace::from_int_basis(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap(),
                Subspace::from_int_basis(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        let forms = vec![
            vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])],
            vec![v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])],
            vec![v(&[1, 0, -1, 0]), v(&[0, 1, 0, -1])],
        ];
        assert_eq!(verify_monomial_generators(&fam, &forms), Ok(true));
    }

    #[test]
    fn single_axis_and_bad_form() {
        let fam = SubspaceFamily::new(2, vec![Subspace::axis(2, 0)]).unwrap();
        assert_eq!(verify_monomial_generators(&fam, &[vec![v(&[0, 1])]]), Ok(true));
        assert_eq!(
            verify_monomial_generators(&fam, &[vec![v(&[1, 0])]]),
            Err(Error::FormDoesNotVanish { subspace: 0, form: 0 })
        );
    }
}
