use num::complex::Complex64;
use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffFunction;
use super::functions::TestFunction;
use crate::error::{Error, Result};
use crate::numeric::{composite_rule, PANEL_NODES};
use crate::polyalg::{FloatPolynomial, Polynomial, SubspaceFamily};


#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_wavelength: usize,
    pub base_panels_per_axis: usize,
    pub max_refinements: usize,
    pub relative_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { nodes_per_wavelength: 8, base_panels_per_axis: 4, max_refinements: 6, relative_tolerance: 1e-9 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_wavelength < 4 {
            return Err(Error::InvalidParameter("nodes_per_wavelength must be at least 4".into()));
        }
        if self.base_panels_per_axis == 0 {
            return Err(Error::InvalidParameter("base_panels_per_axis must be positive".into()));
        }
        if !(self.relative_tolerance > 0.0) {
            return Err(Error::InvalidParameter("relative_tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// A quadrature estimate with its refinement record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub converged: bool,
    /// Panels per axis of the final pass, largest axis.
    pub panels: usize,
    pub refinements: usize,
}

struct Factor {
    coordinates: Vec<Vec<f64>>,
    function: TestFunction,
    /// `||d u / d x_i||` per ambient axis.
    axis_gain: Vec<f64>,
}

/// `e^{i lambda Phi(x)} prod_j a_j(pi_j x) eta(x)`, where `Phi` is `P` minus the
/// pullbacks of every modulated-exponential phase (merged exactly) and
/// `a_j` are the remaining amplitudes.
pub struct Integrand {
    phase: FloatPolynomial,
    exact_phase: Polynomial,
    factors: Vec<Factor>,
    cutoff: CutoffFunction,
    vanishes: bool,
}

impl Integrand {
    pub fn new(p: &Polynomial, family: &SubspaceFamily, fs: &[TestFunction], cutoff: &CutoffFunction) -> Result<Self> {
        let m = family.ambient();
        if p.dimension() != m {
            return Err(Error::DimensionMismatch { expected: m, found: p.dimension() });
        }
        if cutoff.dimension() != m {
            return Err(Error::DimensionMismatch { expected: m, found: cutoff.dimension() });
        }
        if fs.len() != family.len() {
            return Err(Error::DimensionMismatch { expected: family.len(), found: fs.len() });
        }
        let mut phase = p.clone();
        let mut factors = Vec::new();
        let mut vanishes = false;
        for (v, f) in family.subspaces().iter().zip(fs) {
            if !f.fits_dimension(v.dimension()) {
                return Err(Error::InvalidParameter(format!(
                    "test function does not fit a subspace of dimension {}",
                    v.dimension()
                )));
            }
            match f {
                TestFunction::ConstantOne => {}
                TestFunction::ModulatedExponential { phase: q, scale } => {
                    phase = &phase - &v.pullback(q)?.scale(scale);
                }
                TestFunction::TrigPolynomial(t) if t.terms.is_empty() => vanishes = true,
                other => {
                    let coordinates = v.coordinate_matrix_f64();
                    let axis_gain =
                        (0..m).map(|i| coordinates.iter().map(|row| row[i] * row[i]).sum::<f64>().sqrt()).collect();
                    factors.push(Factor { coordinates, function: other.clone(), axis_gain });
                }
            }
        }
        Ok(Integrand { phase: phase.to_float(), exact_phase: phase, factors, cutoff: cutoff.clone(), vanishes })
    }

    /// The merged phase `Phi`.
    pub fn residual_phase(&self) -> &Polynomial {
        &self.exact_phase
    }

    /// Panels per axis needed to put `nodes_per_wavelength` nodes on each
    /// oscillation of the integrand at this `lambda`.
    pub fn panel_budget(&self, lambda: f64, spec: &QuadratureSpec) -> Vec<usize> {
        let r = self.cutoff.radius;
        (0..self.cutoff.dimension())
            .map(|i| {
                let mut rate = lambda.abs() * self.phase.partial_bound(i, &self.cutoff.center, r);
                for f in &self.factors {
                    rate += f.function.frequency_bound() * f.axis_gain[i];
                }
                let cycles = rate * 2.0 * r / std::f64::consts::TAU;
                let nodes = (spec.nodes_per_wavelength as f64 * cycles).ceil() as usize;
                spec.base_panels_per_axis.max(nodes.div_ceil(PANEL_NODES))
            })
            .collect()
    }

    fn point(&self, x: &[f64], lambda: f64, u: &mut Vec<f64>) -> Complex64 {
        let eta = self.cutoff.eval(x);
        if eta == 0.0 {
            return Complex64::zero();
        }
        let mut acc = Complex64::new(eta, 0.0);
        for f in &self.factors {
            u.clear();
            u.extend(f.coordinates.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()));
            acc *= f.function.amplitude(u);
        }
        if self.phase.is_zero() {
            acc
        } else {
            acc * Complex64::cis(lambda * self.phase.eval(x))
        }
    }

    /// Tensor-product rule with the given panel counts per axis.
    pub fn integrate(&self, lambda: f64, panels: &[usize]) -> Complex64 {
        if self.vanishes {
            return Complex64::zero();
        }
        let rules: Vec<Vec<(f64, f64)>> =
            self.cutoff.bounds().iter().zip(panels).map(|(&(a, b), &n)| composite_rule(a, b, n)).collect();
        let m = rules.len();
        if m == 0 {
            return self.point(&[], lambda, &mut Vec::new());
        }
        // Rows in parallel, summed afterwards in index order so the result does
        // not depend on the number of workers.
        let rows: Vec<Complex64> = rules[0]
            .par_iter()
            .map(|&(x0, w0)| {
                let mut x = vec![0.0; m];
                x[0] = x0;
                let mut u = Vec::new();
                let mut idx = vec![0usize; m];
                let mut acc = Complex64::zero();
                loop {
                    let mut w = w0;
                    for k in 1..m {
                        let (xk, wk) = rules[k][idx[k]];
                        x[k] = xk;
                        w *= wk;
                    }
                    acc += self.point(&x, lambda, &mut u) * w;
                    let mut k = m - 1;
                    loop {
                        if k == 0 {
                            return acc;
                        }
                        idx[k] += 1;
                        if idx[k] < rules[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k -= 1;
                    }
                }
            })
            .collect();
        rows.into_iter().fold(Complex64::zero(), |a, b| a + b)
    }

    /// Integrates at the budgeted resolution and doubles panels until two
    /// successive passes agree to the relative tolerance.
    pub fn evaluate(&self, lambda: f64, spec: &QuadratureSpec) -> Result<Estimate> {
        spec.validate()?;
        let mut panels = self.panel_budget(lambda, spec);
        let volume: f64 = self.cutoff.bounds().iter().map(|(a, b)| b - a).product();
        let floor = 1e-12 * volume;
        let mut previous = self.integrate(lambda, &panels);
        for refinements in 1..=spec.max_refinements {
            panels.iter_mut().for_each(|p| *p *= 2);
            let value = self.integrate(lambda, &panels);
            if (value - previous).norm() <= spec.relative_tolerance * value.norm().max(floor) {
                let widest = panels.iter().copied().max().unwrap_or(0);
                return Ok(Estimate { value, converged: true, panels: widest, refinements });
            }
            previous = value;
        }
        let widest = panels.iter().copied().max().unwrap_or(0);
        Ok(Estimate { value: previous, converged: false, panels: widest, refinements: spec.max_refinements })
    }
}

/// `Lambda_lambda = int e^{i lambda P(x)} prod_j f_j(pi_j x) eta(x) dx`.
pub fn lambda_functional(
    p: &Polynomial,
    family: &SubspaceFamily,
    fs: &[TestFunction],
    cutoff: &CutoffFunction,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    Integrand::new(p, family, fs, cutoff)?.evaluate(lambda, spec)
}

/// `int eta`, by the same rule with no phase.
pub fn cutoff_mass(cutoff: &CutoffFunction, spec: &QuadratureSpec) -> Result<f64> {
    let m = cutoff.dimension();
    let family = SubspaceFamily::empty(m);
    Ok(lambda_functional(&Polynomial::zero(m), &family, &[], cutoff, 0.0, spec)?.value.re)
}
