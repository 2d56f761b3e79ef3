use num::complex::Complex64;
use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signal::Signal;
use crate::error::{Error, Result};
use crate::numeric::{composite_rule, PANEL_NODES};
use crate::polyalg::Polynomial;
use crate::rational;

/// Phase `P(x, t)` of the transform: a polynomial in `(x, t)` with a degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearPhase {
    polynomial: Polynomial,
    degree_bound: u32,
    /// `(c, i, k)` for the terms `c x^i t^k` with `k >= 1`.
    t_terms: Vec<(f64, i32, i32)>,
    float_terms: Vec<(f64, i32, i32)>,
}

impl BilinearPhase {
    pub fn new(polynomial: Polynomial, degree_bound: u32) -> Result<Self> {
        if polynomial.dimension() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: polynomial.dimension() });
        }
        if polynomial.degree() > degree_bound as i64 {
            return Err(Error::DegreeTooHigh(polynomial.degree() as usize));
        }
        let float_terms: Vec<(f64, i32, i32)> = polynomial
            .terms()
            .map(|(m, c)| (rational::to_f64(c), m.exponents()[0] as i32, m.exponents()[1] as i32))
            .collect();
        let t_terms = float_terms.iter().copied().filter(|t| t.2 >= 1).collect();
        Ok(BilinearPhase { polynomial, degree_bound, t_terms, float_terms })
    }

    pub fn zero() -> Self {
        Self::new(Polynomial::zero(2), 0).expect("zero phase")
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.polynomial
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.float_terms.iter().map(|&(c, i, k)| c * x.powi(i) * t.powi(k)).sum()
    }

    /// Bound for `|d/dt P(x, t)|` over `|t| <= reach`.
    pub fn t_rate(&self, x: f64, reach: f64) -> f64 {
        self.t_terms.iter().map(|&(c, i, k)| c.abs() * x.abs().powi(i) * k as f64 * reach.powi(k - 1)).sum()
    }
}

/// Truncation and resolution of the principal value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalValueSpec {
    /// Outer cutoff `R`; signals must live in `[-R/2, R/2]`.
    pub outer: f64,
    /// Dyadic shells `[R 2^{-k-1}, R 2^{-k}]`; the inner cutoff is `R 2^{-shells}`.
    pub shells: usize,
    pub nodes_per_wavelength: usize,
    /// Per-shell panel cap; hitting it flags the point as under-resolved.
    pub max_panels_per_shell: usize,
}

impl Default for PrincipalValueSpec {
    fn default() -> Self {
        PrincipalValueSpec { outer: 4.0, shells: 12, nodes_per_wavelength: 8, max_panels_per_shell: 1 << 14 }
    }
}

impl PrincipalValueSpec {
    pub fn inner(&self) -> f64 {
        self.outer * 0.5f64.powi(self.shells as i32)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.outer > 0.0) || self.shells == 0 || self.nodes_per_wavelength < 4 || self.max_panels_per_shell == 0 {
            return Err(Error::InvalidParameter("invalid principal value spec".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BhtOutput {
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Points where some shell hit the panel cap.
    pub flagged: Vec<bool>,
}

impl BhtOutput {
    pub fn any_flagged(&self) -> bool {
        self.flagged.iter().any(|&f| f)
    }
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (lo < hi).then_some((lo, hi))
}

fn hull(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (a, b) {
        (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
        (a, None) => a,
        (None, b) => b,
    }
}

/// `pv int e^{iP(x,t)} f(x-t) g(x+t) dt / t` at a single `x`, computed as
/// `int_0^R (h(t) - h(-t)) / t dt` over dyadic shells plus one inner panel;
/// returns the value and whether some shell was capped.
pub fn bht_point<F: Signal, G: Signal>(
    phase: &BilinearPhase,
    f: &F,
    g: &G,
    x: f64,
    spec: &PrincipalValueSpec,
) -> (Complex64, bool) {
    let (fl, fh) = f.support();
    let (gl, gh) = g.support();
    if fl > fh || gl > gh {
        return (Complex64::zero(), false);
    }
    // t > 0 contributes where x - t in supp f and x + t in supp g; the mirrored
    // term where x + t in supp f and x - t in supp g.
    let plus = overlap((x - fh, x - fl), (gl - x, gh - x));
    let minus = overlap((fl - x, fh - x), (x - gh, x - gl));
    let Some(active) = hull(plus, minus) else {
        return (Complex64::zero(), false);
    };
    let h = |t: f64| {
        let v = f.eval(x - t) * g.eval(x + t);
        if v.is_zero() {
            v
        } else {
            v * Complex64::cis(phase.eval(x, t))
        }
    };
    let odd = |t: f64| (h(t) - h(-t)) / t;
    let bandwidth = f.bandwidth() + g.bandwidth();
    let mut acc = Complex64::zero();
    let mut capped = false;
    let mut hi = spec.outer;
    for k in 0..=spec.shells {
        let lo = if k == spec.shells { 0.0 } else { hi * 0.5 };
        if let Some((a, b)) = overlap((lo, hi), (active.0.max(0.0), active.1)) {
            let rate = phase.t_rate(x, b) + bandwidth;
            let cycles = rate * (b - a) / std::f64::consts::TAU;
            let wanted = ((spec.nodes_per_wavelength as f64 * cycles) / PANEL_NODES as f64).ceil().max(1.0);
            let panels = if wanted > spec.max_panels_per_shell as f64 {
                capped = true;
                spec.max_panels_per_shell
            } else {
                wanted as usize
            };
            acc += composite_rule(a, b, panels).iter().map(|&(t, w)| odd(t) * w).sum::<Complex64>();
        }
        hi *= 0.5;
    }
    (acc, capped)
}

/// `T_P(f, g)` on a grid of `x` values.
pub fn bht_apply<F: Signal, G: Signal>(
    phase: &BilinearPhase,
    f: &F,
    g: &G,
    x_grid: &[f64],
    spec: &PrincipalValueSpec,
) -> Result<BhtOutput> {
    spec.validate()?;
    let half = 0.5 * spec.outer;
    for (lo, hi) in [f.support(), g.support()] {
        if lo <= hi && (lo < -half || hi > half) {
            return Err(Error::InvalidParameter(format!("signal support [{lo}, {hi}] exceeds [-R/2, R/2]")));
        }
    }
    let points: Vec<(Complex64, bool)> = x_grid.par_iter().map(|&x| bht_point(phase, f, g, x, spec)).collect();
    let (values, flagged) = points.into_iter().unzip();
    Ok(BhtOutput { x: x_grid.to_vec(), values, flagged })
}
