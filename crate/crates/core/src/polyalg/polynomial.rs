use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Sparse polynomial in `dimension` variables with exact rational coefficients.
///
/// No stored coefficient is zero, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        Self::term(dim, Monomial::one(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Q::one())
    }

    /// The coordinate function `x_{i+1}`.
    pub fn variable(dim: usize, i: usize) -> Self {
        Self::term(dim, Monomial::variable(dim, i), Q::one())
    }

    pub fn term(dim: usize, m: Monomial, c: Q) -> Self {
        assert_eq!(m.dimension(), dim, "monomial dimension");
        let mut p = Self::zero(dim);
        p.add_term(m, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated monomials accumulate.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Q)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.len() });
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    /// Integer-coefficient shorthand used heavily in tests and examples.
    pub fn from_int_terms(dim: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), rational::q(*c))))
            .expect("exponent length matches dimension")
    }

    pub fn linear_form(coeffs: &[Q]) -> Self {
        let dim = coeffs.len();
        let mut p = Self::zero(dim);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::variable(dim, i), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() <= 0
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Polynomial { dim: self.dim, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: n })
        }
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, x: &[Q]) -> Result<Q> {
        self.check_dim(x.len())?;
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.to_float().eval(x))
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[i] -= 1;
            out.add_term(Monomial::new(ex), c * rational::q(e as i64));
        }
        out
    }

    /// `(w . grad) P`.
    pub fn directional_derivative(&self, w: &[Q]) -> Result<Self> {
        self.check_dim(w.len())?;
        let mut out = Self::zero(self.dim);
        for (i, wi) in w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            out = &out + &self.partial_derivative(i).scale(wi);
        }
        Ok(out)
    }

    /// `d^alpha P` for a multi-index alpha.
    pub fn derivative(&self, alpha: &Monomial) -> Self {
        let mut out = Self::zero(self.dim);
        'terms: for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut ex = m.exponents().to_vec();
            for (i, &a) in alpha.exponents().iter().enumerate() {
                if a > ex[i] {
                    continue 'terms;
                }
                for k in 0..a {
                    coeff *= rational::q((ex[i] - k) as i64);
                }
                ex[i] -= a;
            }
            out.add_term(Monomial::new(ex), coeff);
        }
        out
    }

    /// Composition `P(q_1(y), ..., q_m(y))` with each `q_i` a polynomial in a common space.
    pub fn substitute(&self, vars: &[Polynomial]) -> Result<Polynomial> {
        self.check_dim(vars.len())?;
        let target = vars.first().map_or(0, Polynomial::dimension);
        if let Some(bad) = vars.iter().find(|v| v.dim != target) {
            return Err(Error::DimensionMismatch { expected: target, found: bad.dim });
        }
        let max_deg: Vec<u32> = (0..self.dim)
            .map(|i| self.terms.keys().map(|m| m.exponents()[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Polynomial>> = vars
            .iter()
            .zip(&max_deg)
            .map(|(v, &d)| {
                let mut ps = vec![Polynomial::one(target)];
                for k in 1..=d as usize {
                    let next = &ps[k - 1] * v;
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// The summand of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Homogeneous summands by strictly increasing degree; empty for zero.
    pub fn homogeneous_parts(&self) -> Vec<(u32, Polynomial)> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts.entry(m.degree()).or_insert_with(|| Polynomial::zero(self.dim)).add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Coefficients listed against an ordered monomial basis.
    pub fn coefficients_in(&self, basis: &[Monomial]) -> Vec<Q> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    pub fn from_coefficients(dim: usize, basis: &[Monomial], coeffs: &[Q]) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in basis.iter().zip(coeffs) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    /// Sum of squared coefficients.
    pub fn coefficient_norm_squared(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c * c)
    }

    /// Apolar pairing `sum alpha! a_alpha b_alpha`, which equals `A(d)B` for
    /// homogeneous polynomials of equal degree.
    pub fn apolar_pairing(&self, other: &Polynomial) -> Q {
        let mut acc = Q::zero();
        for (m, a) in &self.terms {
            if let Some(b) = other.terms.get(m) {
                acc += a * b * Q::from_integer(m.factorial());
            }
        }
        acc
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial::new(self)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions");
        let mut out = Polynomial::zero(self.dim);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Q::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    /// Highest graded-lex term first, e.g. `x1^2 - 1/2*x1*x2 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let is_one = m.degree() == 0;
            if a.is_one() && !is_one {
                write!(f, "{m}")?;
            } else if is_one {
                f.write_str(&rational::format_q(&a))?;
            } else {
                write!(f, "{}*{m}", rational::format_q(&a))?;
            }
        }
        Ok(())
    }
}

/// Double-precision copy of a polynomial for hot evaluation loops.
#[derive(Clone, Debug)]
pub struct FloatPolynomial {
    dim: usize,
    max_exp: Vec<u32>,
    terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPolynomial {
    pub fn new(p: &Polynomial) -> Self {
        let terms: Vec<(f64, Vec<u32>)> =
            p.terms.iter().map(|(m, c)| (rational::to_f64(c), m.exponents().to_vec())).collect();
        let max_exp = (0..p.dim).map(|i| terms.iter().map(|t| t.1[i]).max().unwrap_or(0)).collect();
        FloatPolynomial { dim: p.dim, max_exp, terms }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        if self.terms.is_empty() {
            return 0.0;
        }
        // Small tables of powers avoid repeated powi calls.
        let mut pw: [[f64; 16]; 8] = [[1.0; 16]; 8];
        if self.dim <= 8 && self.max_exp.iter().all(|&e| e < 16) {
            for i in 0..self.dim {
                for k in 1..=self.max_exp[i] as usize {
                    pw[i][k] = pw[i][k - 1] * x[i];
                }
            }
            self.terms
                .iter()
                .map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * pw[i][k as usize]))
                .sum()
        } else {
            self.terms
                .iter()
                .map(|(c, e)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32)))
                .sum()
        }
    }

    /// Upper bound for `|d P / d x_i|` on the box `|x_k - center_k| <= radius`.
    pub fn partial_bound(&self, i: usize, center: &[f64], radius: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(_, e)| e[i] > 0)
            .map(|(c, e)| {
                e.iter().enumerate().fold(c.abs(), |acc, (k, &p)| {
                    let r = center[k].abs() + radius;
                    if k == i {
                        acc * p as f64 * r.powi(p as i32 - 1)
                    } else {
                        acc * r.powi(p as i32)
                    }
                })
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn x1x2() -> Polynomial {
        Polynomial::from_int_terms(2, &[(&[1, 1], 1)])
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(x1x2().evaluate(&[q(3), q(4)]).unwrap(), q(12));
        assert_eq!(Polynomial::zero(3).evaluate(&[q(1), q(2), q(3)]).unwrap(), q(0));
        let p = Polynomial::from_int_terms(2, &[(&[4, 0], 1), (&[0, 1], -1)]);
        assert_eq!(p.evaluate(&[qf(1, 2), qf(1, 16)]).unwrap(), q(0));
        assert!(matches!(p.evaluate(&[q(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn directional_derivative_examples() {
        let d = x1x2().directional_derivative(&[q(1), q(0)]).unwrap();
        assert_eq!(d, Polynomial::variable(2, 1));
        let p = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let d = p.directional_derivative(&[q(1), q(1)]).unwrap();
        assert_eq!(d, Polynomial::from_int_terms(2, &[(&[1, 0], 2), (&[0, 1], 2)]));
        let c = Polynomial::constant(2, q(5));
        assert!(c.directional_derivative(&[q(3), q(-1)]).unwrap().is_zero());
        assert!(c.directional_derivative(&[q(3)]).is_err());
    }

    #[test]
    fn homogeneous_parts_examples() {
        let p = Polynomial::from_int_terms(2, &[(&[1, 1], 1), (&[1, 0], 1)]);
        let parts = p.homogeneous_parts();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (1, Polynomial::variable(2, 0)));
        assert_eq!(parts[1], (2, x1x2()));
        assert_eq!(x1x2().homogeneous_parts(), vec![(2, x1x2())]);
        assert!(Polynomial::zero(2).homogeneous_parts().is_empty());
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(Polynomial::zero(2).degree(), -1);
        assert_eq!(Polynomial::one(2).degree(), 0);
        assert_eq!(x1x2().degree(), 2);
    }

    #[test]
    fn derivative_multi_index() {
        let p = Polynomial::from_int_terms(2, &[(&[3, 2], 1)]);
        let d = p.derivative(&Monomial::new(vec![2, 1]));
        assert_eq!(d, Polynomial::from_int_terms(2, &[(&[1, 1], 12)]));
    }

    #[test]
    fn substitute_composes() {
        // (u^2) with u = x1 + x2
        let p = Polynomial::from_int_terms(1, &[(&[2], 1)]);
        let u = Polynomial::linear_form(&[q(1), q(1)]);
        let r = p.substitute(&[u]).unwrap();
        assert_eq!(r, Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]));
    }

    #[test]
    fn display_is_canonical() {
        let p = Polynomial::from_terms(2, vec![(vec![0, 0], q(3)), (vec![1, 1], qf(-1, 2)), (vec![2, 0], q(1))])
            .unwrap();
        assert_eq!(p.to_string(), "x1^2 - 1/2*x1*x2 + 3");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn apolar_pairing_weights_by_factorials() {
        let a = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[1, 1], 1)]);
        // <x1^2 + x1x2, x1^2 + x1x2> = 2 + 1
        assert_eq!(a.apolar_pairing(&a), q(3));
        // equals the operator action a(d) a
        let act = a.derivative(&Monomial::new(vec![2, 0])) + a.derivative(&Monomial::new(vec![1, 1]));
        assert_eq!(act, Polynomial::constant(2, q(3)));
    }

    #[test]
    fn float_copy_matches() {
        let p = Polynomial::from_terms(3, vec![(vec![2, 1, 0], qf(3, 2)), (vec![0, 0, 3], q(-2))]).unwrap();
        let x = [0.3, -1.2, 0.7];
        let exact = 1.5 * 0.09 * -1.2 - 2.0 * 0.343;
        assert!((p.to_float().eval(&x) - exact).abs() < 1e-14);
    }
}
