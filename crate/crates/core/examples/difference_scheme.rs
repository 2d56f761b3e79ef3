//! Finite difference schemes that kill every pullback and return 1 on the
//! nondegenerate polynomial, applied to `P` minus a bounded perturbation.

use oscidecay::degeneracy::{difference_scheme, Coupling};
use oscidecay::numeric::stream;
use oscidecay::oscillatory::TrigPolynomial;
use oscidecay::rational::format_q;
use oscidecay::{Polynomial, Subspace, SubspaceFamily, Q};
use rand::Rng;

fn vectors(vs: &[Vec<Q>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| format!("({})", v.iter().map(format_q).collect::<Vec<_>>().join(", "))).collect();
    parts.join(" ")
}

fn show(name: &str, p: &Polynomial, family: &SubspaceFamily) {
    let scheme = difference_scheme(p, family).unwrap();
    println!("{name}: degree {} route {:?} coupling {:?}", scheme.degree(), scheme.route(), scheme.coupling());
    println!("  generators {}", vectors(scheme.generators()));
    println!("  normalization {}  corner constant {:.4}", scheme.normalization(), scheme.corner_constant());

    let mut rng = stream(7, &[]);
    let trig: Vec<TrigPolynomial> = family.subspaces().iter().map(|v| TrigPolynomial::random(v.dimension(), 2, &mut rng)).collect();
    let coords: Vec<Vec<Vec<f64>>> = family.subspaces().iter().map(Subspace::coordinate_matrix_f64).collect();
    let float = p.to_float();
    let g = |x: &[f64]| {
        let mut v = float.eval(x);
        for (c, t) in coords.iter().zip(&trig) {
            let u: Vec<f64> = c.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
            v -= t.eval(&u).re;
        }
        v
    };
    for _ in 0..3 {
        let x: Vec<f64> = (0..p.dimension()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut r: Vec<f64> = scheme.generators().iter().map(|_| rng.gen_range(0.1..1.0)).collect();
        if scheme.coupling() == Coupling::Coupled {
            let s = r[0];
            r.iter_mut().for_each(|v| *v = s);
        }
        println!("  scheme(P - sum f_j o pi_j) at random (x, r) = {:.12}", scheme.apply(g, &x, &r).unwrap());
    }
}

fn main() {
    show("x1*x2 on the axes", &Polynomial::from_int_terms(2, &[(&[1, 1], 1)]), &SubspaceFamily::axes(2));
    let lines = SubspaceFamily::new(
        2,
        vec![Subspace::from_int_basis(&[&[1, 2]]).unwrap(), Subspace::from_int_basis(&[&[1, -1]]).unwrap()],
    )
    .unwrap();
    show("x1*x2 on two skew lines", &Polynomial::from_int_terms(2, &[(&[1, 1], 1)]), &lines);
    let planes = SubspaceFamily::new(
        4,
        vec![
            Subspace::from_int_basis(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
            Subspace::from_int_basis(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap(),
            Subspace::from_int_basis(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).unwrap(),
        ],
    )
    .unwrap();
    show("x1*x4 - x2*x3 on three planes", &Polynomial::from_int_terms(4, &[(&[1, 0, 0, 1], 1), (&[0, 1, 1, 0], -1)]), &planes);
}
