//! A quadratic phase in the bilinear Hilbert transform is absorbed into chirps
//! on the inputs; the moduli agree pointwise with the zero-phase transform.

use oscidecay::bilinear::{bht_apply, quadratic_reduction, BilinearPhase, Bump, PrincipalValueSpec};
use oscidecay::Polynomial;

fn main() {
    // 3x^2 + 5xt - 2t^2 + x - 4t, in the variables (x, t).
    let p = Polynomial::from_int_terms(2, &[(&[2, 0], 3), (&[1, 1], 5), (&[0, 2], -2), (&[1, 0], 1), (&[0, 1], -4)]);
    let phase = BilinearPhase::new(p, 2).unwrap();
    let red = quadratic_reduction(&phase).unwrap();
    println!("alpha {}  beta {}  gamma {}  delta {}", red.alpha, red.beta, red.gamma, red.delta);
    println!("output phase {}", red.output_phase);

    let (f, g) = (Bump::new(-0.3, 0.6), Bump::new(0.2, 0.5));
    let spec = PrincipalValueSpec::default();
    let xs: Vec<f64> = (0..17).map(|k| -1.0 + k as f64 / 8.0).collect();
    let direct = bht_apply(&phase, &f, &g, &xs, &spec).unwrap();
    let reduced = bht_apply(&BilinearPhase::zero(), &red.modulate_f(f), &red.modulate_g(g), &xs, &spec).unwrap();
    for ((x, a), b) in xs.iter().zip(&direct.values).zip(&reduced.values) {
        println!("x {x:>6.3}  |T_P| {:.10}  |T_0 reduced| {:.10}", a.norm(), b.norm());
    }
}
