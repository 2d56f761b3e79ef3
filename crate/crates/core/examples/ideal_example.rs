//! Three planes in R^4 relative to which `x1 x4 - x2 x3` is nondegenerate but
//! not simply nondegenerate, and the products of defining forms that lie in
//! the annihilating ideal.

use oscidecay::degeneracy::{analyze, dual_annihilating_operator, verify_monomial_generators};
use oscidecay::rational::{format_q, q};
use oscidecay::{Polynomial, Subspace, SubspaceFamily, Q};

fn vectors(vs: &[Vec<Q>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| format!("({})", v.iter().map(format_q).collect::<Vec<_>>().join(", "))).collect();
    parts.join(" ")
}

fn form(c: [i64; 4]) -> Vec<Q> {
    c.iter().map(|&v| q(v)).collect()
}

fn main() {
    let family = SubspaceFamily::new(
        4,
        vec![
            Subspace::from_int_basis(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
            Subspace::from_int_basis(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap(),
            Subspace::from_int_basis(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).unwrap(),
        ],
    )
    .unwrap();
    let p = Polynomial::from_int_terms(4, &[(&[1, 0, 0, 1], 1), (&[0, 1, 1, 0], -1)]);
    let report = analyze(&p, &family);
    println!("P = {p}");
    println!("degenerate {}  relative norm {:.6}", report.degenerate, report.relative_norm);
    println!("simple witness {}", report.simple_witness.as_deref().map_or("none".into(), vectors));
    let op = dual_annihilating_operator(&p, &family).unwrap().unwrap();
    println!("dual operator symbol {}  applied to P: {}", op.symbol(), op.apply(&p));

    let forms = vec![
        vec![form([1, 0, 0, 0]), form([0, 1, 0, 0])],
        vec![form([0, 0, 1, 0]), form([0, 0, 0, 1])],
        vec![form([1, 0, -1, 0]), form([0, 1, 0, -1])],
    ];
    println!("all 8 products of defining forms annihilate the family: {}", verify_monomial_generators(&family, &forms).unwrap());
}
