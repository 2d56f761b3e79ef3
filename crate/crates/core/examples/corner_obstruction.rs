//! Corner configurations of the rectangle scheme for `x1 x2`: whenever every
//! corner `x + r_a sigma_a y_a` lies in the sublevel set, the smallest scale
//! sits below `C_S eps^{1/2}`. Scales are drawn log-uniformly so that
//! all-inside configurations actually occur, then the full check runs above
//! the bound.

use oscidecay::degeneracy::difference_scheme;
use oscidecay::numeric::stream;
use oscidecay::sublevel::{classify_corners, corner_obstruction_check, CornerOutcome, Region, SublevelProblem, SubspaceFunction};
use oscidecay::{Polynomial, SubspaceFamily};
use rand::Rng;

fn main() {
    let p = Polynomial::from_int_terms(2, &[(&[1, 1], 1)]);
    let scheme = difference_scheme(&p, &SubspaceFamily::axes(2)).unwrap();
    let cubic = Polynomial::from_int_terms(1, &[(&[3], 1), (&[1], -1)]);
    let cases = [
        ("g = 0", vec![SubspaceFunction::Zero; 2]),
        ("g1 = u^3 - u, g2 = 0", vec![SubspaceFunction::Polynomial(cubic), SubspaceFunction::Zero]),
    ];
    for (name, functions) in cases {
        println!("{name}");
        for epsilon in [1e-2, 1e-3] {
            let prob = SublevelProblem {
                polynomial: p.clone(),
                family: SubspaceFamily::axes(2),
                functions: functions.clone(),
                region: Region::cube(2, -1.0, 1.0),
                epsilon,
            };
            let mut rng = stream(1, &[]);
            let (mut inside, mut largest) = (0, 0.0f64);
            for _ in 0..20_000 {
                let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let r = [10f64.powf(rng.gen_range(-4.0..0.0)), 10f64.powf(rng.gen_range(-4.0..0.0))];
                let (outcome, _) = classify_corners(&scheme, &prob, &x, &r).unwrap();
                if outcome != CornerOutcome::Escapes {
                    inside += 1;
                    largest = largest.max(r[0].min(r[1]));
                }
            }
            let check = corner_obstruction_check(&scheme, &prob, 100_000, 1).unwrap();
            println!(
                "  eps {epsilon:.0e}  bound {:.4}  all-inside samples {inside:>5}, largest min scale {largest:.4}  |  violations above bound {}/{}",
                check.bound, check.violations, check.trials
            );
        }
    }
}
