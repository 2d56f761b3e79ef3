//! JSON forms: polynomials as `{"dimension", "terms": [{"exponents", "coeff"}]}`
//! and subspaces as `{"basis": [[...], ...]}`, rationals written as strings.

use serde::{Deserialize, Serialize};

use super::{Polynomial, Subspace};
use crate::error::Error;
use crate::rational::{self, Q};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PolynomialJson {
    pub dimension: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SubspaceJson {
    pub basis: Vec<Vec<String>>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            dimension: p.dimension(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson { exponents: m.exponents().to_vec(), coeff: rational::format_q(c) })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: PolynomialJson) -> Result<Self, Error> {
        let terms = j
            .terms
            .into_iter()
            .map(|t| Ok((t.exponents, rational::parse_q(&t.coeff)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        Polynomial::from_terms(j.dimension, terms)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        Polynomial::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub fn vector_to_json(v: &[Q]) -> Vec<String> {
    v.iter().map(rational::format_q).collect()
}

pub fn vector_from_json(v: &[String]) -> Result<Vec<Q>, Error> {
    v.iter().map(|s| rational::parse_q(s)).collect()
}

impl From<&Subspace> for SubspaceJson {
    fn from(s: &Subspace) -> Self {
        SubspaceJson { basis: s.basis().iter().map(|v| vector_to_json(v)).collect() }
    }
}

impl SubspaceJson {
    /// The ambient dimension is needed for the zero subspace, whose basis is empty.
    pub fn into_subspace(self, ambient: usize) -> Result<Subspace, Error> {
        let basis = self.basis.iter().map(|v| vector_from_json(v)).collect::<Result<Vec<_>, _>>()?;
        Subspace::new(ambient, basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn polynomial_round_trip() {
        let p = Polynomial::from_terms(2, vec![(vec![1, 1], qf(-3, 4)), (vec![0, 2], qf(5, 1))]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"dimension":2,"terms":[{"exponents":[0,2],"coeff":"5"},{"exponents":[1,1],"coeff":"-3/4"}]}"#
        );
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_bad_terms() {
        let bad = r#"{"dimension":2,"terms":[{"exponents":[1],"coeff":"1"}]}"#;
        assert!(serde_json::from_str::<Polynomial>(bad).is_err());
        let bad = r#"{"dimension":1,"terms":[{"exponents":[1],"coeff":"x"}]}"#;
        assert!(serde_json::from_str::<Polynomial>(bad).is_err());
    }

    #[test]
    fn subspace_json() {
        let j: SubspaceJson = serde_json::from_str(r#"{"basis":[["1","1/2"]]}"#).unwrap();
        let s = j.into_subspace(2).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(SubspaceJson::from(&s).basis, vec![vec!["1".to_string(), "1/2".to_string()]]);
    }
}
