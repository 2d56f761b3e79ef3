use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffFunction;
use super::functions::{TestFunction, TrigPolynomial};
use super::quadrature::{Integrand, QuadratureSpec};
use crate::error::{Error, Result};
use crate::numeric::{fit_log_log, stream};
use crate::polyalg::{Polynomial, SubspaceFamily};

/// Functions fed into each slot of the functional during a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionFamily {
    /// The same tuple at every `lambda`.
    Fixed { functions: Vec<TestFunction> },
    /// `samples` random trigonometric tuples per `lambda`; the largest
    /// `|Lambda|` is kept. A lower envelope of the true worst case.
    RandomTrig { degree: u32, samples: usize, seed: u64 },
}

impl FunctionFamily {
    /// Tuple `k` at grid index `i`.
    pub fn tuple(&self, family: &SubspaceFamily, i: usize, k: usize) -> Vec<TestFunction> {
        match self {
            FunctionFamily::Fixed { functions } => functions.clone(),
            FunctionFamily::RandomTrig { degree, seed, .. } => {
                let mut rng = stream(*seed, &[i as u64, k as u64]);
                family
                    .subspaces()
                    .iter()
                    .map(|v| TestFunction::TrigPolynomial(TrigPolynomial::random(v.dimension(), *degree, &mut rng)))
                    .collect()
            }
        }
    }

    pub fn samples(&self) -> usize {
        match self {
            FunctionFamily::Fixed { .. } => 1,
            FunctionFamily::RandomTrig { samples, .. } => *samples,
        }
    }
}

/// Least-squares fit of `log |Lambda| = intercept - epsilon log lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub epsilon: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecaySweepResult {
    pub lambdas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub converged: Vec<bool>,
    /// `None` when fewer than four converged points are available.
    pub fit: Option<DecayFit>,
}

impl DecaySweepResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

/// Fit over converged points with `lambda > 0`, restricted to the upper half
/// of the grid but never to fewer than four points.
pub fn fit_decay(lambdas: &[f64], values: &[Complex64], converged: &[bool]) -> Option<DecayFit> {
    let usable: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(values)
        .zip(converged)
        .filter(|((l, v), c)| **c && **l > 0.0 && v.norm() > 0.0)
        .map(|((l, v), _)| (*l, v.norm()))
        .collect();
    if usable.len() < 4 {
        return None;
    }
    let keep = usable.len().div_ceil(2).max(4);
    let top = &usable[usable.len() - keep..];
    let (xs, ys): (Vec<f64>, Vec<f64>) = top.iter().copied().unzip();
    let fit = fit_log_log(&xs, &ys)?;
    Some(DecayFit { epsilon: -fit.slope, intercept: fit.intercept, r2: fit.r2, points: fit.points })
}

pub fn validate_grid(lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 6 {
        return Err(Error::InvalidParameter(format!("lambda grid needs at least 6 points, got {}", lambdas.len())));
    }
    if lambdas[0] < 1.0 {
        return Err(Error::InvalidParameter("lambda grid must start at 1 or above".into()));
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("lambda grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `Lambda_lambda` along a grid, worst case over the function family at each point.
pub fn decay_sweep(
    p: &Polynomial,
    family: &SubspaceFamily,
    functions: &FunctionFamily,
    cutoff: &CutoffFunction,
    lambdas: &[f64],
    spec: &QuadratureSpec,
) -> Result<DecaySweepResult> {
    validate_grid(lambdas)?;
    spec.validate()?;
    let mut values = Vec::with_capacity(lambdas.len());
    let mut converged = Vec::with_capacity(lambdas.len());
    for (i, &lambda) in lambdas.iter().enumerate() {
        let mut worst: Option<Complex64> = None;
        let mut ok = true;
        for k in 0..functions.samples() {
            let fs = functions.tuple(family, i, k);
            let est = Integrand::new(p, family, &fs, cutoff)?.evaluate(lambda, spec)?;
            ok &= est.converged;
            if worst.map_or(true, |w| est.value.norm() > w.norm()) {
                worst = Some(est.value);
            }
        }
        values.push(worst.unwrap_or_default());
        converged.push(ok);
    }
    let fit = fit_decay(lambdas, &values, &converged);
    Ok(DecaySweepResult { lambdas: lambdas.to_vec(), values, converged, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_uses_top_half() {
        let lambdas: Vec<f64> = (0..10).map(|k| 2f64.powi(k)).collect();
        // Preasymptotic junk in the lower half, clean lambda^{-1/2} in the upper half.
        let values: Vec<Complex64> = lambdas
            .iter()
            .enumerate()
            .map(|(k, l)| Complex64::new(if k < 5 { 1.0 } else { 2.0 * l.powf(-0.5) }, 0.0))
            .collect();
        let fit = fit_decay(&lambdas, &values, &[true; 10]).unwrap();
        assert_eq!(fit.points, 5);
        assert!((fit.epsilon - 0.5).abs() < 1e-12);
        assert!(fit_decay(&lambdas, &values, &[false, false, false, false, false, false, false, true, true, true]).is_none());
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[1.0, 2.0, 4.0]).is_err());
        assert!(validate_grid(&[0.5, 1.0, 2.0, 4.0, 8.0, 16.0]).is_err());
        assert!(validate_grid(&[1.0, 2.0, 2.0, 4.0, 8.0, 16.0]).is_err());
        assert!(validate_grid(&[1.0, 2.0, 3.0, 4.0, 8.0, 16.0]).is_ok());
    }
}
