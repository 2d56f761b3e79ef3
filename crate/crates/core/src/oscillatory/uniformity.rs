use std::f64::consts::{PI, TAU};

use num::complex::Complex64;
use num::Zero;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{Monomial, Polynomial};
use crate::rational;

/// Midpoint samples of a function on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_fn<F: Fn(f64) -> Complex64>(lo: f64, hi: f64, n: usize, f: F) -> Self {
        let h = (hi - lo) / n as f64;
        SampledFunction { lo, hi, values: (0..n).map(|k| f(lo + (k as f64 + 0.5) * h)).collect() }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.values.len() as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.step()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.step() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Midpoint value of `int f e^{-i q}` for a polynomial phase with real
    /// coefficients `q[k]` of `x^k`.
    pub fn coefficient(&self, q: &[f64]) -> Complex64 {
        let h = self.step();
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let x = self.point(k);
                let phase = q.iter().rev().fold(0.0, |acc, c| acc * x + c);
                v * Complex64::cis(-phase)
            })
            .sum::<Complex64>()
            * h
    }
}

/// Which phases the scan visits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientGrid {
    /// Coefficients range over `[-extent lambda, extent lambda]`.
    pub extent: f64,
    /// Adjacent phases differ by at most this much on the interval.
    pub phase_step: f64,
    /// Samples required per wavelength of the fastest scanned phase.
    pub nodes_per_wavelength: usize,
}

impl Default for CoefficientGrid {
    fn default() -> Self {
        CoefficientGrid { extent: 3.0, phase_step: PI / 4.0, nodes_per_wavelength: 4 }
    }
}

impl CoefficientGrid {
    fn reach(lo: f64, hi: f64) -> f64 {
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Grid values for the coefficient of `x^k`, `k >= 2`.
    pub fn values(&self, k: u32, lambda: f64, lo: f64, hi: f64) -> Vec<f64> {
        let step = self.phase_step / Self::reach(lo, hi).powi(k as i32);
        let count = (self.extent * lambda.abs() / step).floor() as i64;
        (-count..=count).map(|j| j as f64 * step).collect()
    }

    /// Fastest phase derivative over the scanned phases.
    pub fn max_frequency(&self, lambda: f64, degree: u32, lo: f64, hi: f64) -> f64 {
        let r = Self::reach(lo, hi);
        let e = self.extent * lambda.abs();
        (1..=degree).map(|k| k as f64 * e * r.powi(k as i32 - 1)).sum()
    }

    /// Minimum number of midpoint samples on `[lo, hi]`.
    pub fn required_samples(&self, lambda: f64, degree: u32, lo: f64, hi: f64) -> usize {
        let cycles = self.max_frequency(lambda, degree, lo, hi) * (hi - lo) / TAU;
        ((self.nodes_per_wavelength as f64 * cycles).ceil() as usize).max(1)
    }

    /// FFT length used for the linear coefficient: a power of two at least `8 R / h`.
    pub fn fft_length(&self, samples: &SampledFunction) -> usize {
        let half_width = 0.5 * (samples.hi - samples.lo);
        let need = (TAU / (self.phase_step / half_width) / samples.step()).ceil() as usize;
        need.max(samples.values.len()).next_power_of_two()
    }

    /// Linear coefficients visited for a given sampling: `2 pi k / (M h)` within the extent.
    pub fn linear_values(&self, samples: &SampledFunction, lambda: f64) -> Vec<f64> {
        let m = self.fft_length(samples);
        let unit = TAU / (m as f64 * samples.step());
        let count = ((self.extent * lambda.abs() / unit).floor() as i64).min(m as i64 / 2 - 1);
        (-count..=count).map(|k| k as f64 * unit).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniformity {
    Uniform,
    Nonuniform,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityReport {
    pub lambda: f64,
    pub degree: u32,
    pub tau: f64,
    /// Largest `|int f e^{-i q}|` among the scanned phases; a lower bound
    /// for the supremum over all phases of this degree.
    pub max_coefficient: f64,
    pub classification: Uniformity,
    /// Coefficients of `x^0 .. x^d` of the best phase (constant term 0).
    pub best_coefficients: Vec<f64>,
    pub best_q: Polynomial,
    /// Optimal `c = int f e^{-i q} / |B|` for the best phase.
    pub best_c: Complex64,
    pub l2_norm: f64,
    /// `min_c ||f - c e^{i q}||` at the best phase.
    pub residual_norm: f64,
    /// `(1 - lambda^{-tau}) ||f||`.
    pub threshold: f64,
    pub phases_scanned: u64,
}

const MAX_PHASES: u64 = 1 << 36;

/// Scans polynomial phases of degree `<= degree` and compares the best
/// correlation with the `lambda`-uniformity threshold.
pub fn uniformity_scan(
    f: &SampledFunction,
    lambda: f64,
    degree: u32,
    tau: f64,
    grid: &CoefficientGrid,
) -> Result<UniformityReport> {
    if !(f.hi > f.lo) || f.values.is_empty() {
        return Err(Error::InvalidParameter("empty sampling interval".into()));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter("tau must be positive".into()));
    }
    let need = grid.required_samples(lambda, degree, f.lo, f.hi);
    if f.values.len() < need {
        return Err(Error::UnderResolved { have: f.values.len(), need });
    }
    let width = f.hi - f.lo;
    let h = f.step();
    let higher: Vec<Vec<f64>> = (2..=degree).map(|k| grid.values(k, lambda, f.lo, f.hi)).collect();
    let combos: u64 = higher.iter().map(|v| v.len() as u64).product();
    let m = grid.fft_length(f);
    let linear_count = if degree >= 1 { grid.linear_values(f, lambda).len() as u64 } else { 1 };
    if combos.saturating_mul(linear_count) > MAX_PHASES {
        return Err(Error::InvalidParameter("coefficient grid too large".into()));
    }
    let unit = TAU / (m as f64 * h);
    let kmax = ((grid.extent * lambda.abs() / unit).floor() as i64).min(m as i64 / 2 - 1);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
    let x0 = f.point(0);

    let mut best = (-1.0f64, vec![0.0; degree as usize + 1], Complex64::zero());
    let mut buffer = vec![Complex64::zero(); m];
    let mut scratch = vec![Complex64::zero(); fft.get_inplace_scratch_len()];
    let mut choice = vec![0usize; higher.len()];
    for _ in 0..combos {
        let mut q = vec![0.0; degree as usize + 1];
        for (slot, (&c, vals)) in choice.iter().zip(&higher).enumerate() {
            q[slot + 2] = vals[c];
        }
        if degree == 0 {
            let a = f.coefficient(&q);
            best = (a.norm(), q, a);
            break;
        }
        for (k, v) in f.values.iter().enumerate() {
            let x = f.point(k);
            let phase = q.iter().rev().fold(0.0, |acc, c| acc * x + c);
            buffer[k] = v * Complex64::cis(-phase);
        }
        buffer[f.values.len()..].iter_mut().for_each(|b| *b = Complex64::zero());
        fft.process_with_scratch(&mut buffer, &mut scratch);
        for k in -kmax..=kmax {
            let bin = buffer[k.rem_euclid(m as i64) as usize];
            let size = h * bin.norm();
            if size > best.0 {
                let c1 = k as f64 * unit;
                let a = bin * Complex64::cis(-c1 * x0) * h;
                let mut coeffs = q.clone();
                coeffs[1] = c1;
                best = (size, coeffs, a);
            }
        }
        for (c, vals) in choice.iter_mut().zip(&higher) {
            *c += 1;
            if *c < vals.len() {
                break;
            }
            *c = 0;
        }
    }

    let (max_coefficient, best_coefficients, a) = best;
    let l2_norm = f.l2_norm();
    let residual_norm = (l2_norm * l2_norm - max_coefficient * max_coefficient / width).max(0.0).sqrt();
    let threshold = (1.0 - lambda.abs().powf(-tau)) * l2_norm;
    let classification =
        if l2_norm > 0.0 && residual_norm <= threshold { Uniformity::Nonuniform } else { Uniformity::Uniform };
    let mut best_q = Polynomial::zero(1);
    for (k, c) in best_coefficients.iter().enumerate() {
        if *c != 0.0 {
            best_q.add_term(Monomial::new(vec![k as u32]), rational::from_f64(*c));
        }
    }
    Ok(UniformityReport {
        lambda,
        degree,
        tau,
        max_coefficient,
        classification,
        best_coefficients,
        best_q,
        best_c: a / width,
        l2_norm,
        residual_norm,
        threshold,
        phases_scanned: combos * linear_count,
    })
}
