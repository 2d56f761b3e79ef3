use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillatory::{CutoffFunction, TestFunction};
use crate::polyalg::{Polynomial, SubspaceFamily, SubspaceJson};
use crate::sublevel::Region;

/// Problem description shared by every subcommand. Sections a subcommand
/// does not use are ignored with a warning.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub polynomial: Polynomial,
    #[serde(default)]
    pub subspaces: Vec<SubspaceJson>,
    #[serde(default)]
    pub cutoff: Option<CutoffFunction>,
    #[serde(default)]
    pub functions: Option<Vec<TestFunction>>,
    #[serde(default)]
    pub region: Option<Region>,
    /// Interval `[lo, hi]` for the uniformity scan.
    #[serde(default)]
    pub interval: Option<(f64, f64)>,
}

/// A problem after validation.
pub struct Problem {
    pub file: ProblemFile,
    pub family: SubspaceFamily,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Problem> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("problem file: {e}")))?;
        file.validate()
    }

    fn validate(self) -> Result<Problem> {
        let m = self.dimension;
        if self.polynomial.dimension() != m {
            return Err(Error::DimensionMismatch { expected: m, found: self.polynomial.dimension() });
        }
        let subspaces = self
            .subspaces
            .iter()
            .map(|s| {
                if let Some(v) = s.basis.iter().find(|v| v.len() != m) {
                    return Err(Error::DimensionMismatch { expected: m, found: v.len() });
                }
                s.clone().into_subspace(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let family = SubspaceFamily::new(m, subspaces)?;
        if let Some(c) = &self.cutoff {
            if c.dimension() != m {
                return Err(Error::DimensionMismatch { expected: m, found: c.dimension() });
            }
            if !(c.radius > 0.0) {
                return Err(Error::InvalidParameter("cutoff radius must be positive".into()));
            }
        }
        if let Some(fs) = &self.functions {
            if fs.len() != family.len() {
                return Err(Error::DimensionMismatch { expected: family.len(), found: fs.len() });
            }
            for (f, v) in fs.iter().zip(family.subspaces()) {
                if !f.fits_dimension(v.dimension()) {
                    return Err(Error::InvalidParameter("function does not fit its subspace".into()));
                }
            }
        }
        if let Some(r) = &self.region {
            Region::new(r.lo.clone(), r.hi.clone())?;
            if r.lo.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: r.lo.len() });
            }
        }
        if let Some((lo, hi)) = self.interval {
            if !(hi > lo) {
                return Err(Error::InvalidParameter("interval must have positive length".into()));
            }
        }
        Ok(Problem { file: self, family })
    }

    /// Names of the optional sections that are present.
    pub fn sections(&self) -> BTreeSet<&'static str> {
        let mut out = BTreeSet::new();
        if self.cutoff.is_some() {
            out.insert("cutoff");
        }
        if self.functions.is_some() {
            out.insert("functions");
        }
        if self.region.is_some() {
            out.insert("region");
        }
        if self.interval.is_some() {
            out.insert("interval");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_rank_deficient_basis() {
        let text = r#"{"dimension":2,"polynomial":{"dimension":2,"terms":[]},
            "subspaces":[{"basis":[["1","2"],["2","4"]]}]}"#;
        assert!(ProblemFile::parse(text).is_err());
    }

    #[test]
    fn rejects_wrong_vector_length() {
        let text = r#"{"dimension":2,"polynomial":{"dimension":2,"terms":[]},
            "subspaces":[{"basis":[["1","2","3"]]}]}"#;
        assert!(matches!(ProblemFile::parse(text), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn accepts_axes_problem() {
        let text = r#"{"dimension":2,
            "polynomial":{"dimension":2,"terms":[{"exponents":[1,1],"coeff":"1"}]},
            "subspaces":[{"basis":[["1","0"]]},{"basis":[["0","1"]]}],
            "functions":[{"kind":"constant_one"},{"kind":"constant_one"}]}"#;
        let p = ProblemFile::parse(text).unwrap();
        assert_eq!(p.family.len(), 2);
        assert_eq!(p.file.sections().into_iter().collect::<Vec<_>>(), vec!["functions"]);
    }
}
