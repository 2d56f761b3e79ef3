//! The shear `(x, t) -> (x - sum t_a y_a, t)` turns shifted corners of a set
//! into axis-parallel corners of its lift; checked in exact arithmetic.

use oscidecay::rational::{q, qf};
use oscidecay::sublevel::{shear_lift_check, shear_matrix, Region};
use oscidecay::Q;

fn main() {
    let generators = vec![vec![q(1), q(2)], vec![qf(1, 3), q(-1)]];
    println!("shear matrix determinant {}", shear_matrix(&generators).determinant());
    // A disc and a parabolic sublevel set.
    let disc = |x: &[Q]| &x[0] * &x[0] + &x[1] * &x[1] < q(1);
    let band = |x: &[Q]| {
        let v = &x[1] - &x[0] * &x[0];
        v > qf(-1, 10) && v < qf(1, 10)
    };
    let sample = Region::cube(2, -1.5, 1.5);
    for (name, report) in [
        ("disc", shear_lift_check(&generators, disc, &sample, 10_000, 4).unwrap()),
        ("parabolic band", shear_lift_check(&generators, band, &sample, 10_000, 4).unwrap()),
    ] {
        println!("{name}: {}/{} agreements, passed {}", report.agreements, report.trials, report.passed());
    }
}
