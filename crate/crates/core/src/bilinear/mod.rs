//! Principal-value evaluation of the bilinear Hilbert transform with a
//! polynomial phase, `T_P(f, g)(x) = pv int e^{iP(x,t)} f(x-t) g(x+t) dt/t`,
//! its exact reduction for quadratic phases, and a norm-ratio sweep over
//! growing coefficient scales.

mod reduction;
mod signal;
mod transform;

pub use reduction::{quadratic_reduction, QuadraticReduction};
pub use signal::{Bump, Chirped, Combination, Signal, ZeroSignal};
pub use transform::{bht_apply, bht_point, BhtOutput, BilinearPhase, PrincipalValueSpec};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{fit_log_log, stream};
use crate::polyalg::{monomials_up_to, Polynomial};
use crate::rational;

/// Trapezoid `L^p` norm of samples on a grid.
pub fn lp_norm(x: &[f64], values: &[f64], p: f64) -> f64 {
    let integral: f64 = x
        .windows(2)
        .zip(values.windows(2))
        .map(|(xs, vs)| 0.5 * (xs[1] - xs[0]) * (vs[0].abs().powf(p) + vs[1].abs().powf(p)))
        .sum();
    integral.powf(1.0 / p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRatioConfig {
    pub degree: u32,
    pub p1: f64,
    pub p2: f64,
    /// Coefficient scales; every coefficient is uniform in `[-scale, scale]`.
    pub scales: Vec<f64>,
    pub trials_per_scale: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub spec: PrincipalValueSpec,
}

impl NormRatioConfig {
    pub fn new(degree: u32, p1: f64, p2: f64) -> Self {
        NormRatioConfig {
            degree,
            p1,
            p2,
            scales: (0..=10).map(|k| 2f64.powi(k)).collect(),
            trials_per_scale: 10,
            seed: 0,
            grid_points: 129,
            spec: PrincipalValueSpec::default(),
        }
    }

    pub fn q(&self) -> f64 {
        1.0 / (1.0 / self.p1 + 1.0 / self.p2)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p1 > 1.0 && self.p2 > 1.0) {
            return Err(Error::InvalidParameter("p1 and p2 must exceed 1".into()));
        }
        if !(self.q() > 2.0 / 3.0) {
            return Err(Error::InvalidParameter("q must exceed 2/3".into()));
        }
        if self.scales.is_empty() || self.scales.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidParameter("scales must be positive".into()));
        }
        if self.grid_points < 3 || self.trials_per_scale == 0 {
            return Err(Error::InvalidParameter("need at least 3 grid points and one trial".into()));
        }
        self.spec.validate()
    }

    /// Uniform grid on `[-R/2, R/2]`.
    pub fn x_grid(&self) -> Vec<f64> {
        let half = 0.5 * self.spec.outer;
        let n = self.grid_points;
        (0..n).map(|k| -half + self.spec.outer * k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub trial: usize,
    pub scale: f64,
    /// Coefficients in graded-lex order of the monomials `x^i t^k`, `1 <= i + k <= degree`.
    pub coefficients: Vec<f64>,
    pub f: Bump,
    pub g: Bump,
    pub ratio: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRatioReport {
    pub p1: f64,
    pub p2: f64,
    pub q: f64,
    pub degree: u32,
    pub samples: Vec<RatioSample>,
    /// `(scale, max ratio at that scale)`.
    pub per_scale_max: Vec<(f64, f64)>,
    /// Empirical lower envelope of the operator norm; not a bound.
    pub max_ratio: f64,
    /// Least-squares slope of `log max ratio` against `log scale`.
    pub slope_vs_scale: Option<f64>,
    pub flagged: bool,
}

/// Random smooth bump inside `[-R/4 - R/8, R/4 + R/8]` with a mild modulation.
pub fn random_bump<R: Rng>(rng: &mut R, outer: f64) -> Bump {
    Bump {
        center: rng.gen_range(-outer / 8.0..outer / 8.0),
        radius: rng.gen_range(outer / 16.0..outer / 8.0),
        height: 1.0,
        frequency: rng.gen_range(-2.0..2.0),
    }
}

/// Monomials `x^i t^k` with `1 <= i + k <= degree`, graded-lex.
pub fn phase_monomials(degree: u32) -> Vec<crate::polyalg::Monomial> {
    monomials_up_to(2, degree).into_iter().filter(|m| m.degree() >= 1).collect()
}

/// `||T_P(f,g)||_q / (||f||_p1 ||g||_p2)` for one phase and pair.
pub fn norm_ratio<F: Signal, G: Signal>(
    phase: &BilinearPhase,
    f: &F,
    g: &G,
    config: &NormRatioConfig,
) -> Result<(f64, bool)> {
    let grid = config.x_grid();
    let out = bht_apply(phase, f, g, &grid, &config.spec)?;
    let t: Vec<f64> = out.values.iter().map(|v| v.norm()).collect();
    let fv: Vec<f64> = grid.iter().map(|&y| f.eval(y).norm()).collect();
    let gv: Vec<f64> = grid.iter().map(|&y| g.eval(y).norm()).collect();
    let denom = lp_norm(&grid, &fv, config.p1) * lp_norm(&grid, &gv, config.p2);
    if denom == 0.0 {
        return Err(Error::InvalidParameter("test functions vanish on the grid".into()));
    }
    Ok((lp_norm(&grid, &t, config.q()) / denom, out.any_flagged()))
}

/// Samples random phases of degree `<= d` at each scale, with random bump
/// pairs, and records the largest norm ratio per scale.
pub fn norm_ratio_sweep(config: &NormRatioConfig) -> Result<NormRatioReport> {
    config.validate()?;
    let monomials = phase_monomials(config.degree);
    let mut samples = Vec::new();
    let mut per_scale_max = Vec::new();
    for (si, &scale) in config.scales.iter().enumerate() {
        let mut best = 0.0f64;
        for trial in 0..config.trials_per_scale {
            let mut rng = stream(config.seed, &[si as u64, trial as u64]);
            let coefficients: Vec<f64> = monomials.iter().map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
            let f = random_bump(&mut rng, config.spec.outer);
            let g = random_bump(&mut rng, config.spec.outer);
            let mut p = Polynomial::zero(2);
            for (m, c) in monomials.iter().zip(&coefficients) {
                p.add_term(m.clone(), rational::from_f64(*c));
            }
            let phase = BilinearPhase::new(p, config.degree)?;
            let (ratio, flagged) = norm_ratio(&phase, &f, &g, config)?;
            best = best.max(ratio);
            samples.push(RatioSample { trial, scale, coefficients, f, g, ratio, flagged });
        }
        per_scale_max.push((scale, best));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = per_scale_max.iter().copied().unzip();
    let slope_vs_scale = fit_log_log(&xs, &ys).map(|f| f.slope);
    let max_ratio = ys.iter().copied().fold(0.0, f64::max);
    let flagged = samples.iter().any(|s| s.flagged);
    Ok(NormRatioReport {
        p1: config.p1,
        p2: config.p2,
        q: config.q(),
        degree: config.degree,
        samples,
        per_scale_max,
        max_ratio,
        slope_vs_scale,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|k| -1.5 + 3.0 * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn even_bumps_give_zero_at_origin() {
        let f = Bump::new(0.0, 0.5);
        let out = bht_apply(&BilinearPhase::zero(), &f, &f, &[0.0], &PrincipalValueSpec::default()).unwrap();
        assert!(out.values[0].norm() < 1e-14);
    }

    #[test]
    fn zero_signal_gives_zero() {
        let g = Bump::new(0.2, 0.5);
        let out = bht_apply(&BilinearPhase::zero(), &ZeroSignal, &g, &grid(9), &PrincipalValueSpec::default()).unwrap();
        assert!(out.values.iter().all(|v| *v == num::complex::Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn translation_covariance() {
        let spec = PrincipalValueSpec::default();
        let (f, g) = (Bump::new(-0.2, 0.4), Bump::new(0.3, 0.5));
        let shift = 0.25;
        let (fs, gs) = (Bump::new(-0.2 + shift, 0.4), Bump::new(0.3 + shift, 0.5));
        let xs = grid(13);
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let a = bht_apply(&BilinearPhase::zero(), &f, &g, &xs, &spec).unwrap();
        let b = bht_apply(&BilinearPhase::zero(), &fs, &gs, &shifted, &spec).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u - v).norm() < 1e-9);
        }
    }

    #[test]
    fn lp_norm_of_constant() {
        let xs = [0.0, 0.5, 1.0, 2.0];
        assert!((lp_norm(&xs, &[3.0; 4], 2.0) - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exponent_validation() {
        assert!(NormRatioConfig::new(3, 1.0, 2.0).validate().is_err());
        assert!(NormRatioConfig::new(3, 1.1, 1.1).validate().is_err());
        assert!(NormRatioConfig::new(3, 2.0, 2.0).validate().is_ok());
    }
}
