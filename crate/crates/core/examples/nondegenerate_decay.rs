//! Worst-case decay of `int e^{i lambda x1 x2} f1(x1) f2(x2) eta(x) dx` over
//! random trigonometric f_j, with the fitted exponent.

use std::time::Instant;

use oscidecay::numeric::geometric_grid;
use oscidecay::oscillatory::{decay_sweep, CutoffFunction, FunctionFamily, QuadratureSpec};
use oscidecay::{Polynomial, SubspaceFamily};

fn main() {
    let p = Polynomial::from_int_terms(2, &[(&[1, 1], 1)]);
    let family = SubspaceFamily::axes(2);
    let functions = FunctionFamily::RandomTrig { degree: 3, samples: 8, seed: 2024 };
    let lambdas = geometric_grid(1.0, 1024.0, 11);
    let start = Instant::now();
    let sweep =
        decay_sweep(&p, &family, &functions, &CutoffFunction::unit(2), &lambdas, &QuadratureSpec::default()).unwrap();
    for ((l, v), c) in sweep.lambdas.iter().zip(&sweep.values).zip(&sweep.converged) {
        println!("lambda {l:>8.1}  |Lambda| {:.6e}  converged {c}", v.norm());
    }
    match sweep.fit {
        Some(fit) => println!("epsilon_hat {:.4}  r2 {:.4}  ({} points)", fit.epsilon, fit.r2, fit.points),
        None => println!("no fit"),
    }
    println!("elapsed {:.1?}", start.elapsed());
}
