//! `int e^{i lambda x^2} eta(x) dx` against the stationary phase prediction
//! `sqrt(pi / lambda) eta(0)`.

use oscidecay::numeric::geometric_grid;
use oscidecay::oscillatory::{decay_sweep, CutoffFunction, FunctionFamily, QuadratureSpec};
use oscidecay::{Polynomial, SubspaceFamily};

fn main() {
    let p = Polynomial::from_int_terms(1, &[(&[2], 1)]);
    let cutoff = CutoffFunction::unit(1).with_order(6);
    let lambdas = geometric_grid(16.0, 4096.0, 9);
    let sweep = decay_sweep(
        &p,
        &SubspaceFamily::empty(1),
        &FunctionFamily::Fixed { functions: vec![] },
        &cutoff,
        &lambdas,
        &QuadratureSpec::default(),
    )
    .unwrap();
    for (l, v) in sweep.lambdas.iter().zip(&sweep.values) {
        let predicted = (std::f64::consts::PI / l).sqrt() * cutoff.eval(&[0.0]);
        println!("lambda {l:>7}  |Lambda| {:.8e}  stationary phase {predicted:.8e}", v.norm());
    }
    let fit = sweep.fit.unwrap();
    println!("epsilon_hat {:.4}  r2 {:.5}", fit.epsilon, fit.r2);
}
