//! Monte Carlo measure of `{x in [0,1]^2 : |x1 x2 - g1(x1) - g2(x2)| < eps}`,
//! first with `g = 0` against the closed form, then with random bounded `g`.

use oscidecay::numeric::{geometric_grid, stream};
use oscidecay::oscillatory::{TestFunction, TrigPolynomial};
use oscidecay::sublevel::{sublevel_scaling, Region, SublevelProblem, SubspaceFunction};
use oscidecay::{Polynomial, SubspaceFamily};

fn main() {
    let epsilons = geometric_grid(1e-1, 1e-3, 5);
    let mut prob = SublevelProblem {
        polynomial: Polynomial::from_int_terms(2, &[(&[1, 1], 1)]),
        family: SubspaceFamily::axes(2),
        functions: vec![SubspaceFunction::Zero; 2],
        region: Region::cube(2, 0.0, 1.0),
        epsilon: 1e-2,
    };
    let scaling = sublevel_scaling(&prob, &epsilons, 1_000_000, 3).unwrap();
    println!("g = 0");
    for e in &scaling.estimates {
        let exact = e.epsilon * (1.0 - e.epsilon.ln());
        println!("  eps {:.1e}  estimate {:.6} +- {:.6}  closed form {exact:.6}", e.epsilon, e.estimate, e.standard_error);
    }
    println!("  delta_hat {:.4}", scaling.fit.unwrap().delta);

    let mut rng = stream(5, &[]);
    prob.functions = (0..2)
        .map(|_| SubspaceFunction::Test(TestFunction::TrigPolynomial(TrigPolynomial::random(1, 3, &mut rng))))
        .collect();
    let scaling = sublevel_scaling(&prob, &epsilons, 1_000_000, 3).unwrap();
    println!("random trigonometric g");
    for e in &scaling.estimates {
        println!("  eps {:.1e}  estimate {:.6} +- {:.6}", e.epsilon, e.estimate, e.standard_error);
    }
    match scaling.fit {
        Some(fit) => println!("  delta_hat {:.4}", fit.delta),
        None => println!("  too few hits to fit"),
    }
}
