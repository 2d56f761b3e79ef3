//! Largest correlation of a sampled function with polynomial phases of
//! bounded degree, and the resulting uniformity classification.

use num::complex::Complex64;
use oscidecay::oscillatory::{uniformity_scan, CoefficientGrid, SampledFunction};

fn main() {
    let lambda = 64.0;
    let grid = CoefficientGrid::default();
    let n = grid.required_samples(lambda, 2, -1.0, 1.0).next_multiple_of(64);
    let cases: Vec<(&str, SampledFunction)> = vec![
        ("chirp e^{i(20x + 40x^2)}", SampledFunction::from_fn(-1.0, 1.0, n, |x| Complex64::cis(20.0 * x + 40.0 * x * x))),
        ("alternating steps, 64 cells", SampledFunction::from_fn(-1.0, 1.0, n, |x| {
            let cell = ((x + 1.0) * 32.0).floor() as i64;
            Complex64::new(if cell % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })),
        ("x e^{i 3x^3}", SampledFunction::from_fn(-1.0, 1.0, n, |x| x * Complex64::cis(3.0 * x.powi(3)))),
    ];
    for (name, f) in cases {
        let report = uniformity_scan(&f, lambda, 2, 0.1, &grid).unwrap();
        println!(
            "{name}: max coefficient {:.5} of L2 norm {:.5} -> {:?} (phases scanned {})",
            report.max_coefficient, report.l2_norm, report.classification, report.phases_scanned
        );
    }
}
