//! A degenerate phase paired with the functions that cancel it: the integrand
//! loses its oscillation and `|Lambda|` stays at the cutoff mass.

use oscidecay::degeneracy::relative_norm;
use oscidecay::numeric::geometric_grid;
use oscidecay::oscillatory::{adversarial_functions, decay_sweep, CutoffFunction, FunctionFamily, QuadratureSpec};
use oscidecay::{Polynomial, SubspaceFamily};

fn main() {
    let family = SubspaceFamily::axes(2);
    let p = Polynomial::from_int_terms(2, &[(&[1, 0], 1), (&[0, 2], 1)]);
    let fit = relative_norm(&p, &family);
    println!("P = {p}, relative norm {}", fit.norm);
    let functions = adversarial_functions(&fit.minimizers);
    let lambdas = geometric_grid(1.0, 4096.0, 13);
    let sweep = decay_sweep(
        &p,
        &family,
        &FunctionFamily::Fixed { functions },
        &CutoffFunction::unit(2),
        &lambdas,
        &QuadratureSpec::default(),
    )
    .unwrap();
    for (l, v) in sweep.lambdas.iter().zip(&sweep.values) {
        println!("lambda {l:>7}  |Lambda| {:.15}", v.norm());
    }
    if let Some(fit) = sweep.fit {
        println!("epsilon_hat {:.2e}", fit.epsilon);
    }
}
