use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use super::basis::is_degenerate_homogeneous;
use super::operators::{dual_annihilating_operator, simple_witness, DifferentialOperator};
use crate::error::{Error, Result};
use crate::polyalg::{Polynomial, SubspaceFamily};
use crate::rational::{self, Q};

/// How the terms of a scheme cancel pullbacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Every term on its own contains, for each member `V_j`, a difference
    /// along a vector of `V_j^perp`. Each generator may carry its own scale.
    Separable,
    /// Cancellation happens between terms and needs one common scale.
    Coupled,
}

/// Which construction produced the scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Coordinate differences weighted by the apolar dual symbol.
    ApolarDual,
    /// Differences along simple-nondegeneracy witness directions.
    Witness,
}

/// One product of `D` divided differences, scaled by `coefficient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeTerm {
    pub coefficient: Q,
    /// Indices into [`DifferenceScheme::generators`]; blocks of distinct terms are disjoint.
    pub generators: Vec<usize>,
}

/// Finite linear combination of shifted evaluations
/// `L_r g(x) = sum_terms b / prod(r) * sum_sigma (-1)^{D-|sigma|} g(x + sum r_a sigma_a y_a)`
/// that kills every function of the form `f o pi_j` and returns exactly 1 on
/// the polynomial it was built for (after lower-degree and degenerate parts
/// are added).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceScheme {
    degree: u32,
    dim: usize,
    generators: Vec<Vec<Q>>,
    terms: Vec<SchemeTerm>,
    normalization: Q,
    coupling: Coupling,
    route: Route,
}

impl DifferenceScheme {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// The points `y_alpha`, one per index of the enlarged index set.
    pub fn generators(&self) -> &[Vec<Q>] {
        &self.generators
    }

    pub fn terms(&self) -> &[SchemeTerm] {
        &self.terms
    }

    /// Value of the unnormalized operator on `P_D`.
    pub fn normalization(&self) -> &Q {
        &self.normalization
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn route(&self) -> Route {
        self.route
    }

    /// Unit-scale coefficient of the corner `sum sigma_a y_a`.
    pub fn coefficient(&self, sigma: &[bool]) -> Q {
        assert_eq!(sigma.len(), self.generators.len(), "sign pattern length");
        let d = self.degree as usize;
        let parity = |k: usize| if (d - k) % 2 == 0 { Q::one() } else { -Q::one() };
        let support: Vec<usize> = (0..sigma.len()).filter(|&a| sigma[a]).collect();
        if support.is_empty() {
            return self.terms.iter().fold(Q::zero(), |acc, t| acc + &t.coefficient * parity(0));
        }
        self.terms
            .iter()
            .find(|t| support.iter().all(|a| t.generators.contains(a)))
            .map_or_else(Q::zero, |t| &t.coefficient * parity(support.len()))
    }

    /// Upper bound `sum_terms |b| 2^D` for the unit-scale coefficient mass.
    pub fn coefficient_mass(&self) -> Q {
        let two_d = rational::q(1i64 << self.degree);
        self.terms.iter().fold(Q::zero(), |acc, t| acc + t.coefficient.abs() * &two_d)
    }

    /// `C_S = (coefficient mass)^{1/D}`: if every corner lies in a sublevel
    /// set of height `eps`, the smallest scale is at most `C_S eps^{1/D}`.
    pub fn corner_constant(&self) -> f64 {
        rational::to_f64(&self.coefficient_mass()).powf(1.0 / self.degree as f64)
    }

    fn check_scales(&self, r: &[f64]) -> Result<()> {
        if r.len() != self.generators.len() {
            return Err(Error::DimensionMismatch { expected: self.generators.len(), found: r.len() });
        }
        if let Some(&bad) = r.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::NonPositiveScale(bad));
        }
        if self.coupling == Coupling::Coupled && r.iter().any(|&v| (v - r[0]).abs() > 1e-12 * r[0]) {
            return Err(Error::NonUniformScale);
        }
        Ok(())
    }

    /// Corner offsets at scales `r` with their (merged) coefficients,
    /// dropping zero coefficients. The origin comes first.
    pub fn corners(&self, r: &[f64]) -> Result<Vec<(Vec<f64>, f64)>> {
        self.check_scales(r)?;
        let d = self.degree as usize;
        let gens: Vec<Vec<f64>> = self.generators.iter().map(|y| y.iter().map(rational::to_f64).collect()).collect();
        let mut origin = 0.0;
        let mut out = vec![(vec![0.0; self.dim], 0.0)];
        for t in &self.terms {
            let scale: f64 = t.generators.iter().map(|&a| r[a]).product();
            let b = rational::to_f64(&t.coefficient) / scale;
            for mask in 0u32..(1 << d) {
                let k = mask.count_ones() as usize;
                let c = if (d - k) % 2 == 0 { b } else { -b };
                if mask == 0 {
                    origin += c;
                    continue;
                }
                let mut y = vec![0.0; self.dim];
                for (bit, &a) in t.generators.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        for (yi, gi) in y.iter_mut().zip(&gens[a]) {
                            *yi += r[a] * gi;
                        }
                    }
                }
                out.push((y, c));
            }
        }
        out[0].1 = origin;
        if origin == 0.0 {
            out.remove(0);
        }
        Ok(out)
    }

    /// `L_r g(x)` in double precision.
    pub fn apply<G: Fn(&[f64]) -> f64>(&self, g: G, x: &[f64], r: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let corners = self.corners(r)?;
        let mut point = vec![0.0; self.dim];
        let mut acc = 0.0;
        for (y, c) in &corners {
            for ((p, xi), yi) in point.iter_mut().zip(x).zip(y) {
                *p = xi + yi;
            }
            acc += c * g(&point);
        }
        Ok(acc)
    }

    /// `L_r P(x)` in exact arithmetic.
    pub fn apply_exact(&self, p: &Polynomial, x: &[Q], r: &[Q]) -> Result<Q> {
        let rf: Vec<f64> = r.iter().map(rational::to_f64).collect();
        self.check_scales(&rf)?;
        if self.coupling == Coupling::Coupled && r.iter().any(|v| v != &r[0]) {
            return Err(Error::NonUniformScale);
        }
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let d = self.degree as usize;
        let mut acc = Q::zero();
        for t in &self.terms {
            let scale = t.generators.iter().fold(Q::one(), |acc, &a| acc * &r[a]);
            let b = &t.coefficient / scale;
            for mask in 0u32..(1 << d) {
                let mut point = x.to_vec();
                for (bit, &a) in t.generators.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        for (pi, gi) in point.iter_mut().zip(&self.generators[a]) {
                            *pi += &r[a] * gi;
                        }
                    }
                }
                let v = p.evaluate(&point)?;
                if (d - mask.count_ones() as usize) % 2 == 0 {
                    acc += &b * v;
                } else {
                    acc -= &b * v;
                }
            }
        }
        Ok(acc)
    }

    /// `sum_beta c_beta P(x + r y_beta)` with one common undivided scale `r`;
    /// equals `r^D` on the polynomial the scheme was built for.
    pub fn apply_undivided(&self, p: &Polynomial, x: &[Q], r: &Q) -> Result<Q> {
        let rs = vec![r.clone(); self.generators.len()];
        Ok(self.apply_exact(p, x, &rs)? * num::pow(r.clone(), self.degree as usize))
    }

    /// Exact check that the scheme kills every function of `pi_j(x)`:
    /// termwise for separable schemes, by fiber sums at a common scale
    /// for coupled ones.
    pub fn annihilates_pullbacks(&self, family: &SubspaceFamily) -> bool {
        match self.coupling {
            Coupling::Separable => self.terms.iter().all(|t| term_is_admissible(&t.generators, &self.generators, family)),
            Coupling::Coupled => fibers_cancel(self, family),
        }
    }

    /// Unit-scale corners with merged exact coefficients.
    fn exact_corners(&self) -> BTreeMap<Vec<Q>, Q> {
        let d = self.degree as usize;
        let mut out: BTreeMap<Vec<Q>, Q> = BTreeMap::new();
        for t in &self.terms {
            for mask in 0u32..(1 << d) {
                let mut y = vec![Q::zero(); self.dim];
                for (bit, &a) in t.generators.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        for (yi, gi) in y.iter_mut().zip(&self.generators[a]) {
                            *yi += gi;
                        }
                    }
                }
                let c = if (d - mask.count_ones() as usize) % 2 == 0 {
                    t.coefficient.clone()
                } else {
                    -t.coefficient.clone()
                };
                *out.entry(y).or_insert_with(Q::zero) += c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

fn term_is_admissible(block: &[usize], generators: &[Vec<Q>], family: &SubspaceFamily) -> bool {
    family
        .subspaces()
        .iter()
        .all(|v| block.iter().any(|&a| v.project(&generators[a]).iter().all(Zero::is_zero)))
}

fn fibers_cancel(scheme: &DifferenceScheme, family: &SubspaceFamily) -> bool {
    let corners = scheme.exact_corners();
    family.subspaces().iter().all(|v| {
        let mut fibers: BTreeMap<Vec<Q>, Q> = BTreeMap::new();
        for (y, c) in &corners {
            *fibers.entry(v.coordinates(y)).or_insert_with(Q::zero) += c;
        }
        fibers.values().all(Zero::is_zero)
    })
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

/// Scheme whose terms are coordinate differences `Delta_beta` weighted by the
/// coefficients of the apolar dual symbol.
fn apolar_scheme(p: &Polynomial, symbol: &Polynomial) -> (Vec<Vec<Q>>, Vec<SchemeTerm>, Q) {
    let dim = p.dimension();
    let normalization = symbol.apolar_pairing(p);
    let mut generators = Vec::new();
    let mut terms = Vec::new();
    for (beta, s) in symbol.terms() {
        let mut block = Vec::new();
        for (i, &e) in beta.exponents().iter().enumerate() {
            for _ in 0..e {
                block.push(generators.len());
                generators.push(unit(dim, i));
            }
        }
        terms.push(SchemeTerm { coefficient: s / &normalization, generators: block });
    }
    (generators, terms, normalization)
}

/// Single-term scheme along witness directions, padded with coordinate
/// differences up to degree `D`.
fn witness_scheme(p: &Polynomial, witness: Vec<Vec<Q>>) -> Option<(Vec<Vec<Q>>, Vec<SchemeTerm>, Q)> {
    let dim = p.dimension();
    let rest = DifferentialOperator::from_directions(dim, &witness).apply(p);
    let (alpha, coeff) = rest.terms().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
    let normalization = coeff * Q::from_integer(alpha.factorial());
    let mut generators = witness;
    for (i, &e) in alpha.exponents().iter().enumerate() {
        for _ in 0..e {
            generators.push(unit(dim, i));
        }
    }
    let block: Vec<usize> = (0..generators.len()).collect();
    let terms = vec![SchemeTerm { coefficient: Q::one() / &normalization, generators: block }];
    Some((generators, terms, normalization))
}

/// Builds a difference scheme for a nondegenerate homogeneous `P_D`.
///
/// Tries, in order: the apolar-dual coordinate scheme when every term is
/// separable; a witness scheme when `P_D` is simply nondegenerate; the
/// apolar-dual scheme as a coupled scheme when its fibers cancel exactly.
pub fn difference_scheme(p: &Polynomial, family: &SubspaceFamily) -> Result<DifferenceScheme> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = p.degree();
    if d <= 0 || is_degenerate_homogeneous(p, family, d as u32) {
        return Err(Error::Degenerate);
    }
    let d = d as u32;
    let dim = p.dimension();
    let symbol = dual_annihilating_operator(p, family)?.ok_or(Error::Degenerate)?.symbol().clone();
    let (generators, terms, normalization) = apolar_scheme(p, &symbol);
    let mut scheme =
        DifferenceScheme { degree: d, dim, generators, terms, normalization, coupling: Coupling::Separable, route: Route::ApolarDual };
    if scheme.annihilates_pullbacks(family) {
        return Ok(scheme);
    }
    if let Some((generators, terms, normalization)) = simple_witness(p, family).and_then(|w| witness_scheme(p, w)) {
        let ws = DifferenceScheme {
            degree: d,
            dim,
            generators,
            terms,
            normalization,
            coupling: Coupling::Separable,
            route: Route::Witness,
        };
        debug_assert!(ws.annihilates_pullbacks(family));
        return Ok(ws);
    }
    scheme.coupling = Coupling::Coupled;
    if scheme.annihilates_pullbacks(family) {
        return Ok(scheme);
    }
    Err(Error::NoSchemeFound)
}

/// `L_r g(x)` for an evaluable `g`.
pub fn apply_scheme<G: Fn(&[f64]) -> f64>(scheme: &DifferenceScheme, g: G, x: &[f64], r: &[f64]) -> Result<f64> {
    scheme.apply(g, x, r)
}
