use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::polyalg::Polynomial;
use crate::rational::{self, Q};

/// One term `amplitude * e^{i frequency . u}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub re: f64,
    pub im: f64,
    pub frequency: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub terms: Vec<TrigTerm>,
}

impl TrigPolynomial {
    /// Random integer frequencies in `[-degree, degree]^kappa`, complex
    /// amplitudes normalized to total modulus 1, so `|f| <= 1` everywhere.
    pub fn random<R: Rng>(kappa: usize, degree: u32, rng: &mut R) -> Self {
        let d = degree as i64;
        let side = (2 * d + 1) as usize;
        let count = side.pow(kappa as u32);
        let mut terms = Vec::with_capacity(count);
        for index in 0..count {
            let mut rest = index;
            let frequency = (0..kappa)
                .map(|_| {
                    let k = (rest % side) as i64 - d;
                    rest /= side;
                    k as f64
                })
                .collect();
            terms.push(TrigTerm { re: rng.gen_range(-1.0..1.0), im: rng.gen_range(-1.0..1.0), frequency });
        }
        let total: f64 = terms.iter().map(|t| t.re.hypot(t.im)).sum();
        if total > 0.0 {
            for t in &mut terms {
                t.re /= total;
                t.im /= total;
            }
        }
        TrigPolynomial { terms }
    }

    pub fn eval(&self, u: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let phase: f64 = t.frequency.iter().zip(u).map(|(k, x)| k * x).sum();
                Complex64::new(t.re, t.im) * Complex64::cis(phase)
            })
            .sum()
    }
}

mod q_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{self, Q};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        rational::parse_q(&s).map_err(serde::de::Error::custom)
    }
}

fn one() -> Q {
    rational::q(1)
}

/// Bounded function on a subspace, evaluated in frame coordinates `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    ConstantOne,
    TrigPolynomial(TrigPolynomial),
    /// `e^{-i scale lambda phase(u)}`, following the current `lambda`.
    ModulatedExponential {
        phase: Polynomial,
        #[serde(with = "q_string", default = "one")]
        scale: Q,
    },
    /// Smoothed indicator of `lo <= u_1 <= hi` with transition width `width`.
    SmoothedIndicator { lo: f64, hi: f64, width: f64 },
    /// `+-1` on `steps` equal cells of `[lo, hi)` in `u_1`, starting with `+1`; zero outside.
    AlternatingSteps { lo: f64, hi: f64, steps: usize },
}

impl TestFunction {
    pub fn zero() -> Self {
        TestFunction::TrigPolynomial(TrigPolynomial { terms: Vec::new() })
    }

    pub fn modulated(phase: Polynomial) -> Self {
        TestFunction::ModulatedExponential { phase, scale: one() }
    }

    /// Whether the function makes sense on a `kappa`-dimensional subspace.
    pub fn fits_dimension(&self, kappa: usize) -> bool {
        match self {
            TestFunction::ConstantOne => true,
            TestFunction::TrigPolynomial(t) => t.terms.iter().all(|term| term.frequency.len() == kappa),
            TestFunction::ModulatedExponential { phase, .. } => phase.dimension() == kappa,
            TestFunction::SmoothedIndicator { .. } | TestFunction::AlternatingSteps { .. } => kappa >= 1,
        }
    }

    /// Value at `u` for the given `lambda`.
    pub fn value(&self, u: &[f64], lambda: f64) -> Complex64 {
        match self {
            TestFunction::ModulatedExponential { phase, scale } => {
                Complex64::cis(-lambda * rational::to_f64(scale) * phase.to_float().eval(u))
            }
            other => other.amplitude(u),
        }
    }

    /// Value with any modulated-exponential factor left out.
    pub fn amplitude(&self, u: &[f64]) -> Complex64 {
        match self {
            TestFunction::ConstantOne | TestFunction::ModulatedExponential { .. } => Complex64::new(1.0, 0.0),
            TestFunction::TrigPolynomial(t) => t.eval(u),
            TestFunction::SmoothedIndicator { lo, hi, width } => {
                let step = |s: f64| 0.5 * (1.0 + s.tanh());
                Complex64::new(step((u[0] - lo) / width) * step((hi - u[0]) / width), 0.0)
            }
            TestFunction::AlternatingSteps { lo, hi, steps } => {
                if u[0] < *lo || u[0] >= *hi {
                    return Complex64::new(0.0, 0.0);
                }
                let cell = ((u[0] - lo) / (hi - lo) * *steps as f64).floor() as usize;
                Complex64::new(if cell % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            }
        }
    }

    /// Bound on the rate of change of the amplitude in `u`, in radians per unit length.
    pub fn frequency_bound(&self) -> f64 {
        match self {
            TestFunction::ConstantOne | TestFunction::ModulatedExponential { .. } => 0.0,
            TestFunction::TrigPolynomial(t) => t
                .terms
                .iter()
                .map(|term| term.frequency.iter().map(|k| k * k).sum::<f64>().sqrt())
                .fold(0.0, f64::max),
            TestFunction::SmoothedIndicator { width, .. } => 1.0 / width,
            TestFunction::AlternatingSteps { lo, hi, steps } => std::f64::consts::PI * *steps as f64 / (hi - lo),
        }
    }

    /// Upper bound for `sup |f|`.
    pub fn sup_bound(&self) -> f64 {
        match self {
            TestFunction::TrigPolynomial(t) => t.terms.iter().map(|term| term.re.hypot(term.im)).sum(),
            _ => 1.0,
        }
    }
}

/// `f_j = e^{-i lambda p_j}` for the members of a decomposition, so that
/// `e^{i lambda P} prod f_j(pi_j x)` loses every degenerate component.
pub fn adversarial_functions(minimizers: &[Polynomial]) -> Vec<TestFunction> {
    minimizers.iter().map(|p| TestFunction::modulated(p.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::stream;

    #[test]
    fn random_trig_is_bounded_by_one() {
        let t = TrigPolynomial::random(2, 2, &mut stream(3, &[0]));
        assert_eq!(t.terms.len(), 25);
        let f = TestFunction::TrigPolynomial(t);
        assert!((f.sup_bound() - 1.0).abs() < 1e-12);
        for k in 0..50 {
            let u = [k as f64 * 0.37, -(k as f64) * 0.11];
            assert!(f.value(&u, 1.0).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn zero_modulation_is_one() {
        let f = adversarial_functions(&[Polynomial::zero(1)]).remove(0);
        assert_eq!(f.value(&[0.3], 100.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn steps_alternate() {
        let f = TestFunction::AlternatingSteps { lo: -1.0, hi: 1.0, steps: 4 };
        let vals: Vec<f64> = [-0.9, -0.4, 0.1, 0.6, 1.0].iter().map(|&x| f.amplitude(&[x]).re).collect();
        assert_eq!(vals, vec![1.0, -1.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn json_shape() {
        let f: TestFunction = serde_json::from_str(
            r#"{"kind":"modulated_exponential","phase":{"dimension":1,"terms":[{"exponents":[2],"coeff":"1"}]}}"#,
        )
        .unwrap();
        assert!(matches!(f, TestFunction::ModulatedExponential { .. }));
        let g: TestFunction = serde_json::from_str(r#"{"kind":"constant_one"}"#).unwrap();
        assert_eq!(g, TestFunction::ConstantOne);
    }
}
