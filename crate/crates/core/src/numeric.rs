//! Small numerical building blocks shared by the analytic modules.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Nodes per Gauss–Legendre panel.
pub const PANEL_NODES: usize = 16;

fn reference_panel() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(PANEL_NODES))
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("at least one node"));
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Composite rule: `panels` equal panels of [`PANEL_NODES`] nodes on `[a, b]`.
pub fn composite_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let reference = reference_panel();
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * reference.len());
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        for &(t, w) in reference {
            out.push((mid + 0.5 * width * t, 0.5 * width * w));
        }
    }
    out
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Some(LinearFit { slope, intercept, r2, points: n })
}

/// Fit of `log y` against `log x`; nonpositive values are skipped.
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).unzip();
    fit_line(&lx, &ly)
}

/// `ratio^0, ratio^1, ...` scaled to run from `lo` to `hi` in `points` steps.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    // Base 2 keeps power-of-two grids exact.
    let step = (hi / lo).log2() / (points - 1) as f64;
    (0..points).map(|k| if k + 1 == points { hi } else { lo * (step * k as f64).exp2() }).collect()
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream for `(master, indices...)`; the same key always gives
/// the same stream regardless of evaluation order or thread count.
pub fn stream(master: u64, indices: &[u64]) -> ChaCha8Rng {
    let seed = indices.iter().fold(mix(master), |acc, &i| mix(acc ^ mix(i)));
    ChaCha8Rng::seed_from_u64(seed)
}

/// Runs `f` on a pool capped at `threads` workers (`0` means the global pool).
pub fn with_threads<T: Send, F: FnOnce() -> T + Send>(threads: usize, f: F) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn composite_rule_integrates_smooth_functions() {
        let rule = composite_rule(0.0, std::f64::consts::PI, 3);
        let v: f64 = rule.iter().map(|(x, w)| w * x.sin()).sum();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.5)).collect();
        let fit = fit_log_log(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        let flat = fit_line(&[0.0, 1.0, 2.0], &[5.0, 5.0, 5.0]).unwrap();
        assert_eq!((flat.slope, flat.r2), (0.0, 1.0));
    }

    #[test]
    fn streams_depend_on_every_index() {
        let a: u64 = stream(7, &[1, 2]).gen();
        let b: u64 = stream(7, &[2, 1]).gen();
        let c: u64 = stream(7, &[1, 2]).gen();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn geometric_grid_hits_endpoints() {
        let g = geometric_grid(1.0, 4096.0, 13);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[12], 4096.0);
        assert!((g[6] - 64.0).abs() < 1e-9);
    }
}
