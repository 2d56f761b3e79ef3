//! Norm ratios `||T_P(f,g)||_q / (||f||_p1 ||g||_p2)` for random cubic phases
//! at coefficient scales 1 .. 1024, next to the zero-phase baseline.

use std::time::Instant;

use oscidecay::bilinear::{norm_ratio_sweep, NormRatioConfig};

fn main() {
    for degree in [0, 3] {
        let start = Instant::now();
        let config = NormRatioConfig { seed: 11, ..NormRatioConfig::new(degree, 2.0, 2.0) };
        let report = norm_ratio_sweep(&config).unwrap();
        println!("degree {degree}  (q = {})", report.q);
        for (scale, ratio) in &report.per_scale_max {
            println!("  scale {scale:>6}  max ratio {ratio:.5}");
        }
        println!(
            "  overall max {:.5}  slope vs scale {:.4}  flagged {}  [{:.1?}]",
            report.max_ratio,
            report.slope_vs_scale.unwrap_or(f64::NAN),
            report.flagged,
            start.elapsed()
        );
    }
}
