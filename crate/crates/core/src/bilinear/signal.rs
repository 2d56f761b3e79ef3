use num::complex::Complex64;
use num::Zero;
use serde::{Deserialize, Serialize};

/// Compactly supported function of one variable sampled by the transform.
pub trait Signal: Sync {
    fn eval(&self, y: f64) -> Complex64;
    /// Closed interval outside which the signal vanishes; `lo > hi` means empty.
    fn support(&self) -> (f64, f64);
    /// Bound on the local angular frequency, in radians per unit length.
    fn bandwidth(&self) -> f64;
}

impl<S: Signal + ?Sized> Signal for &S {
    fn eval(&self, y: f64) -> Complex64 {
        (**self).eval(y)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn bandwidth(&self) -> f64 {
        (**self).bandwidth()
    }
}

impl<S: Signal + ?Sized + Send> Signal for Box<S> {
    fn eval(&self, y: f64) -> Complex64 {
        (**self).eval(y)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn bandwidth(&self) -> f64 {
        (**self).bandwidth()
    }
}

/// `height * exp(1 - 1/(1 - s^2)) * e^{i frequency y}`, `s = (y - center)/radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub radius: f64,
    pub height: f64,
    pub frequency: f64,
}

impl Bump {
    pub fn new(center: f64, radius: f64) -> Self {
        Bump { center, radius, height: 1.0, frequency: 0.0 }
    }
}

impl Signal for Bump {
    fn eval(&self, y: f64) -> Complex64 {
        let s = (y - self.center) / self.radius;
        let w = 1.0 - s * s;
        if w <= 0.0 {
            return Complex64::zero();
        }
        let v = self.height * (1.0 - 1.0 / w).exp();
        if self.frequency == 0.0 {
            Complex64::new(v, 0.0)
        } else {
            Complex64::from_polar(v, self.frequency * y)
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    fn bandwidth(&self) -> f64 {
        // The profile is steep near its edges; about 40 nodes per radius keep
        // Gauss-Legendre panels accurate to 1e-9 across a bump.
        32.0 / self.radius + self.frequency.abs()
    }
}

/// `e^{i q(y)} * inner(y)` for a real polynomial `q` given by coefficients of `y^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chirped<S> {
    pub inner: S,
    pub phase: Vec<f64>,
}

impl<S: Signal> Signal for Chirped<S> {
    fn eval(&self, y: f64) -> Complex64 {
        let v = self.inner.eval(y);
        if v.is_zero() {
            return v;
        }
        let q = self.phase.iter().rev().fold(0.0, |acc, c| acc * y + c);
        v * Complex64::cis(q)
    }

    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }

    fn bandwidth(&self) -> f64 {
        let (lo, hi) = self.inner.support();
        let reach = lo.abs().max(hi.abs());
        let slope: f64 =
            self.phase.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c.abs() * reach.powi(k as i32 - 1)).sum();
        self.inner.bandwidth() + slope
    }
}

/// `sum_k c_k s_k`.
pub struct Combination<S> {
    pub terms: Vec<(Complex64, S)>,
}

impl<S: Signal> Signal for Combination<S> {
    fn eval(&self, y: f64) -> Complex64 {
        self.terms.iter().map(|(c, s)| c * s.eval(y)).sum()
    }

    fn support(&self) -> (f64, f64) {
        self.terms.iter().map(|(_, s)| s.support()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (lo, hi)| {
            if lo > hi {
                (a, b)
            } else {
                (a.min(lo), b.max(hi))
            }
        })
    }

    fn bandwidth(&self) -> f64 {
        self.terms.iter().map(|(_, s)| s.bandwidth()).fold(0.0, f64::max)
    }
}

/// The zero function.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ZeroSignal;

impl Signal for ZeroSignal {
    fn eval(&self, _: f64) -> Complex64 {
        Complex64::zero()
    }
    fn support(&self) -> (f64, f64) {
        (1.0, -1.0)
    }
    fn bandwidth(&self) -> f64 {
        0.0
    }
}
