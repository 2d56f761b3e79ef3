//! Monte Carlo measure of sublevel sets `{x in B : |P(x) - sum g_j(pi_j x)| < eps}`,
//! the corner-configuration bound for difference schemes, and the shear lift
//! that turns general corner sets into coordinate boxes.

use num::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degeneracy::{Coupling, DifferenceScheme};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numeric::{fit_log_log, stream};
use crate::oscillatory::TestFunction;
use crate::polyalg::{FloatPolynomial, Polynomial, SubspaceFamily};
use crate::rational::{self, Q};

/// Samples drawn from one seeded stream; streams are independent of the thread count.
const CHUNK: usize = 1 << 14;

/// Axis-aligned box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) {
            return Err(Error::InvalidParameter("region must have positive width on every axis".into()));
        }
        Ok(Region { lo, hi })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Region { lo: vec![lo; dim], hi: vec![hi; dim] }
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.lo).zip(&self.hi).all(|((v, a), b)| v >= a && v <= b)
    }

    fn sample<R: Rng>(&self, rng: &mut R, x: &mut [f64]) {
        for ((v, a), b) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
            *v = a + (b - a) * rng.gen::<f64>();
        }
    }
}

/// Function subtracted on one subspace, evaluated in frame coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum SubspaceFunction {
    Zero,
    /// Exact polynomial, merged symbolically into the residual.
    Polynomial(Polynomial),
    /// Real part of a bounded test function at `lambda = 1`.
    Test(TestFunction),
}

#[derive(Clone, Debug)]
pub struct SublevelProblem {
    pub polynomial: Polynomial,
    pub family: SubspaceFamily,
    pub functions: Vec<SubspaceFunction>,
    pub region: Region,
    pub epsilon: f64,
}

/// `P - sum g_j o pi_j`, with polynomial `g_j` merged exactly.
struct Residual {
    float: FloatPolynomial,
    others: Vec<(Vec<Vec<f64>>, TestFunction)>,
}

impl Residual {
    fn new(prob: &SublevelProblem) -> Result<Self> {
        let m = prob.family.ambient();
        if prob.polynomial.dimension() != m {
            return Err(Error::DimensionMismatch { expected: m, found: prob.polynomial.dimension() });
        }
        if prob.region.lo.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: prob.region.lo.len() });
        }
        if prob.functions.len() != prob.family.len() {
            return Err(Error::DimensionMismatch { expected: prob.family.len(), found: prob.functions.len() });
        }
        let mut merged = prob.polynomial.clone();
        let mut others = Vec::new();
        for (v, g) in prob.family.subspaces().iter().zip(&prob.functions) {
            match g {
                SubspaceFunction::Zero => {}
                SubspaceFunction::Polynomial(p) => merged = &merged - &v.pullback(p)?,
                SubspaceFunction::Test(f) => {
                    if !f.fits_dimension(v.dimension()) {
                        return Err(Error::InvalidParameter("test function does not fit its subspace".into()));
                    }
                    others.push((v.coordinate_matrix_f64(), f.clone()));
                }
            }
        }
        Ok(Residual { float: merged.to_float(), others })
    }

    fn eval(&self, x: &[f64], u: &mut Vec<f64>) -> f64 {
        let mut acc = self.float.eval(x);
        for (c, f) in &self.others {
            u.clear();
            u.extend(c.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()));
            acc -= f.value(u, 1.0).re;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelEstimate {
    pub epsilon: f64,
    pub samples: usize,
    pub hits: usize,
    pub estimate: f64,
    pub standard_error: f64,
}

impl SublevelEstimate {
    fn new(epsilon: f64, samples: usize, hits: usize, volume: f64) -> Self {
        let p = hits as f64 / samples as f64;
        SublevelEstimate {
            epsilon,
            samples,
            hits,
            estimate: volume * p,
            standard_error: volume * (p * (1.0 - p) / samples as f64).sqrt(),
        }
    }
}

/// Hit counts for several thresholds from one common sample stream.
fn count_hits(prob: &SublevelProblem, epsilons: &[f64], samples: usize, seed: u64) -> Result<Vec<usize>> {
    let residual = Residual::new(prob)?;
    let m = prob.family.ambient();
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Vec<usize>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, &[c as u64]);
            let mut x = vec![0.0; m];
            let mut u = Vec::new();
            let mut hits = vec![0usize; epsilons.len()];
            let n = CHUNK.min(samples - c * CHUNK);
            for _ in 0..n {
                prob.region.sample(&mut rng, &mut x);
                let v = residual.eval(&x, &mut u).abs();
                for (h, e) in hits.iter_mut().zip(epsilons) {
                    if v < *e {
                        *h += 1;
                    }
                }
            }
            hits
        })
        .collect();
    Ok(partial.into_iter().fold(vec![0; epsilons.len()], |mut acc, h| {
        acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
        acc
    }))
}

/// Uniform Monte Carlo estimate of `|E_eps|`.
pub fn sublevel_measure(prob: &SublevelProblem, samples: usize, seed: u64) -> Result<SublevelEstimate> {
    if samples < 10_000 {
        return Err(Error::InvalidParameter("at least 10^4 samples are required".into()));
    }
    if !(prob.epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let hits = count_hits(prob, &[prob.epsilon], samples, seed)?[0];
    Ok(SublevelEstimate::new(prob.epsilon, samples, hits, prob.region.volume()))
}

/// Fit `log |E_eps| = intercept + delta log eps` over well-sampled points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelFit {
    pub delta: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SublevelScaling {
    pub estimates: Vec<SublevelEstimate>,
    /// `None` when fewer than two points reach the hit floor.
    pub fit: Option<SublevelFit>,
}

/// Points with fewer hits are left out of the fit.
pub const HIT_FLOOR: usize = 100;

/// Estimates along a decreasing `eps` grid from one common sample stream, so
/// the estimates are monotone in `eps`.
pub fn sublevel_scaling(prob: &SublevelProblem, epsilons: &[f64], samples: usize, seed: u64) -> Result<SublevelScaling> {
    if epsilons.len() < 4 {
        return Err(Error::InvalidParameter("epsilon grid needs at least 4 points".into()));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) || epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidParameter("epsilon grid must be positive and strictly decreasing".into()));
    }
    if samples < 10_000 {
        return Err(Error::InvalidParameter("at least 10^4 samples are required".into()));
    }
    let hits = count_hits(prob, epsilons, samples, seed)?;
    let volume = prob.region.volume();
    let estimates: Vec<SublevelEstimate> =
        epsilons.iter().zip(&hits).map(|(&e, &h)| SublevelEstimate::new(e, samples, h, volume)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        estimates.iter().filter(|e| e.hits >= HIT_FLOOR).map(|e| (e.epsilon, e.estimate)).unzip();
    let fit = fit_log_log(&xs, &ys)
        .map(|f| SublevelFit { delta: f.slope, intercept: f.intercept, r2: f.r2, points: f.points });
    Ok(SublevelScaling { estimates, fit })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerOutcome {
    /// Some corner is outside `E_eps`.
    Escapes,
    /// Every corner is in `E_eps`, and some scale is at or below the bound.
    AllInsideSmallScale,
    /// Every corner is in `E_eps` with every scale above the bound.
    Violation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub trials: usize,
    pub violations: usize,
    /// Trials whose corners all landed in `E_eps`.
    pub all_inside: usize,
    /// `C_S eps^{1/D}`.
    pub bound: f64,
    /// Smallest `max_corner |g| / eps` seen; above 1 means no trial came close.
    pub closest_margin: f64,
}

/// Corner test for one `(x, r)`; also returns `max_corner |g| / eps`.
pub fn classify_corners(
    scheme: &DifferenceScheme,
    prob: &SublevelProblem,
    x: &[f64],
    r: &[f64],
) -> Result<(CornerOutcome, f64)> {
    let residual = Residual::new(prob)?;
    classify_with(&residual, scheme, prob, x, r)
}

fn classify_with(
    residual: &Residual,
    scheme: &DifferenceScheme,
    prob: &SublevelProblem,
    x: &[f64],
    r: &[f64],
) -> Result<(CornerOutcome, f64)> {
    let corners = scheme.corners(r)?;
    let mut u = Vec::new();
    let mut point = vec![0.0; x.len()];
    let mut worst = 0.0f64;
    let mut inside = true;
    // The origin always belongs to the corner set even when its merged coefficient cancels.
    let origin = std::iter::once(vec![0.0; x.len()]);
    for y in origin.chain(corners.into_iter().map(|(y, _)| y)) {
        for ((p, a), b) in point.iter_mut().zip(x).zip(&y) {
            *p = a + b;
        }
        let v = residual.eval(&point, &mut u).abs();
        worst = worst.max(v / prob.epsilon);
        inside &= v < prob.epsilon && prob.region.contains(&point);
    }
    let bound = scheme.corner_constant() * prob.epsilon.powf(1.0 / scheme.degree() as f64);
    let outcome = if !inside {
        CornerOutcome::Escapes
    } else if r.iter().any(|&s| s <= bound) {
        CornerOutcome::AllInsideSmallScale
    } else {
        CornerOutcome::Violation
    };
    Ok((outcome, worst))
}

/// Samples `x` uniformly in the region and scales in `(C_S eps^{1/D}, 1]`,
/// counting configurations whose corners all lie in `E_eps`.
pub fn corner_obstruction_check(
    scheme: &DifferenceScheme,
    prob: &SublevelProblem,
    trials: usize,
    seed: u64,
) -> Result<ObstructionReport> {
    let m = prob.family.ambient();
    if scheme.dimension() != m {
        return Err(Error::DimensionMismatch { expected: m, found: scheme.dimension() });
    }
    let residual = Residual::new(prob)?;
    let bound = scheme.corner_constant() * prob.epsilon.powf(1.0 / scheme.degree() as f64);
    if bound >= 1.0 {
        return Err(Error::InvalidParameter("epsilon too large: the scale bound exceeds 1".into()));
    }
    let k = scheme.generators().len();
    let chunks = trials.div_ceil(CHUNK);
    let partial: Vec<Result<(usize, usize, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, &[c as u64]);
            let mut x = vec![0.0; m];
            let mut r = vec![0.0; k];
            let (mut violations, mut inside, mut margin) = (0, 0, f64::INFINITY);
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                prob.region.sample(&mut rng, &mut x);
                // Scales uniform in (bound, 1]; coupled schemes take one common scale.
                for s in r.iter_mut() {
                    *s = 1.0 - (1.0 - bound) * rng.gen::<f64>();
                }
                if scheme.coupling() == Coupling::Coupled {
                    let first = r[0];
                    r.iter_mut().for_each(|s| *s = first);
                }
                let (outcome, worst) = classify_with(&residual, scheme, prob, &x, &r)?;
                margin = margin.min(worst);
                match outcome {
                    CornerOutcome::Escapes => {}
                    CornerOutcome::AllInsideSmallScale => inside += 1,
                    CornerOutcome::Violation => {
                        inside += 1;
                        violations += 1;
                    }
                }
            }
            Ok((violations, inside, margin))
        })
        .collect();
    let mut report = ObstructionReport { trials, violations: 0, all_inside: 0, bound, closest_margin: f64::INFINITY };
    for part in partial {
        let (v, i, mgn) = part?;
        report.violations += v;
        report.all_inside += i;
        report.closest_margin = report.closest_margin.min(mgn);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShearReport {
    pub trials: usize,
    pub agreements: usize,
    /// Exact determinant of the linear map `(x, t) -> (x - sum t_a y_a, t)`.
    pub determinant: Q,
}

impl ShearReport {
    pub fn passed(&self) -> bool {
        self.agreements == self.trials && self.determinant.is_one()
    }
}

/// Matrix of `T(x, t) = (x - sum_a t_a y_a, t)` on `R^m x R^{|A|}`.
pub fn shear_matrix(generators: &[Vec<Q>]) -> Matrix {
    let m = generators.first().map_or(0, Vec::len);
    let k = generators.len();
    let mut rows = vec![vec![Q::zero(); m + k]; m + k];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    for (a, y) in generators.iter().enumerate() {
        for (i, yi) in y.iter().enumerate() {
            rows[i][m + a] = -yi.clone();
        }
    }
    Matrix::from_rows(&rows)
}

/// Checks `x + sum r_a sigma_a y_a in E <=> T(x, s) + (0, sum r_a sigma_a e_a) in T(E x B)`
/// at random rational `(x, s, r, sigma)`, with `B` a ball large enough to
/// contain every `s + sum r_a sigma_a e_a` that is sampled.
pub fn shear_lift_check<E: Fn(&[Q]) -> bool>(
    generators: &[Vec<Q>],
    in_set: E,
    sample_box: &Region,
    trials: usize,
    seed: u64,
) -> Result<ShearReport> {
    let m = sample_box.lo.len();
    if let Some(y) = generators.iter().find(|y| y.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: y.len() });
    }
    let k = generators.len();
    let t = shear_matrix(generators);
    let determinant = t.determinant();
    // s in [-1, 1]^k and r in (0, 1]^k keep every lifted t inside a ball of radius 2 sqrt(k) + 1.
    let radius = rational::q(2 * (k as i64 + 1));
    let in_ball = |v: &[Q]| v.iter().fold(Q::zero(), |acc, c| acc + c * c) <= &radius * &radius;
    let lifted_member = |z: &[Q], tv: &[Q]| {
        let mut back: Vec<Q> = z.to_vec();
        for (a, y) in generators.iter().enumerate() {
            for (bi, yi) in back.iter_mut().zip(y) {
                *bi += &tv[a] * yi;
            }
        }
        in_ball(tv) && in_set(&back)
    };
    let mut rng = stream(seed, &[]);
    let dyadic = |rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64| {
        let steps = 1i64 << 20;
        let j = rng.gen_range(0..=steps);
        rational::from_f64(lo) + rational::from_f64(hi - lo) * rational::qf(j, steps)
    };
    let mut agreements = 0;
    for _ in 0..trials {
        let x: Vec<Q> = (0..m).map(|i| dyadic(&mut rng, sample_box.lo[i], sample_box.hi[i])).collect();
        let s: Vec<Q> = (0..k).map(|_| dyadic(&mut rng, -1.0, 1.0)).collect();
        let r: Vec<Q> = (0..k).map(|_| dyadic(&mut rng, 0.0, 1.0)).collect();
        let sigma: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        let mut left = x.clone();
        for a in 0..k {
            if sigma[a] {
                for (li, yi) in left.iter_mut().zip(&generators[a]) {
                    *li += &r[a] * yi;
                }
            }
        }
        let mut point: Vec<Q> = x.iter().cloned().chain(s.iter().cloned()).collect();
        point = t.mul_vec(&point);
        for a in 0..k {
            if sigma[a] {
                point[m + a] += &r[a];
            }
        }
        if in_set(&left) == lifted_member(&point[..m], &point[m..]) {
            agreements += 1;
        }
    }
    Ok(ShearReport { trials, agreements, determinant })
}
