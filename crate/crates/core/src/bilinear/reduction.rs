use serde::{Deserialize, Serialize};

use super::signal::{Chirped, Signal};
use super::transform::BilinearPhase;
use crate::error::{Error, Result};
use crate::polyalg::{Monomial, Polynomial};
use crate::rational::{self, Q};

/// For `P = a0 x^2 + a1 x t + a2 t^2 + b1 x + b2 t + c0`,
/// `T_P(f, g)(x) = e^{i phi(x)} T_0(f~, g~)(x)` with
/// `f~(y) = e^{i(alpha y^2 + gamma y)} f(y)`, `g~(y) = e^{i(beta y^2 + delta y)} g(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticReduction {
    #[serde(with = "q_string")]
    pub alpha: Q,
    #[serde(with = "q_string")]
    pub beta: Q,
    #[serde(with = "q_string")]
    pub gamma: Q,
    #[serde(with = "q_string")]
    pub delta: Q,
    /// `phi(x) = (a0 - a2) x^2 + c0`.
    pub output_phase: Polynomial,
}

mod q_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{self, Q};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        rational::parse_q(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl QuadraticReduction {
    fn chirp(quadratic: &Q, linear: &Q) -> Vec<f64> {
        vec![0.0, rational::to_f64(linear), rational::to_f64(quadratic)]
    }

    pub fn modulate_f<S: Signal>(&self, f: S) -> Chirped<S> {
        Chirped { inner: f, phase: Self::chirp(&self.alpha, &self.gamma) }
    }

    pub fn modulate_g<S: Signal>(&self, g: S) -> Chirped<S> {
        Chirped { inner: g, phase: Self::chirp(&self.beta, &self.delta) }
    }
}

/// Splits a phase of degree at most 2 into modulations of `f` and `g`.
pub fn quadratic_reduction(phase: &BilinearPhase) -> Result<QuadraticReduction> {
    let p = phase.polynomial();
    if p.degree() > 2 {
        return Err(Error::DegreeTooHigh(p.degree() as usize));
    }
    let c = |i: u32, k: u32| p.coefficient(&Monomial::new(vec![i, k]));
    let (a0, a1, a2) = (c(2, 0), c(1, 1), c(0, 2));
    let (b1, b2, c0) = (c(1, 0), c(0, 1), c(0, 0));
    let half = rational::qf(1, 2);
    let quarter = rational::qf(1, 4);
    let mut output_phase = Polynomial::constant(1, c0);
    output_phase.add_term(Monomial::new(vec![2]), &a0 - &a2);
    Ok(QuadraticReduction {
        alpha: &a2 * &half - &a1 * &quarter,
        beta: &a2 * &half + &a1 * &quarter,
        gamma: (&b1 - &b2) * &half,
        delta: (&b1 + &b2) * &half,
        output_phase,
    })
}
