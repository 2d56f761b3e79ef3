//! Exact degeneracy analysis of a few polynomials against the coordinate axes
//! of the plane: decision, relative norm, best-fit decomposition and the
//! operators certifying nondegeneracy.

use oscidecay::degeneracy::analyze;
use oscidecay::rational::format_q;
use oscidecay::{Polynomial, SubspaceFamily, Q};

fn vectors(vs: &[Vec<Q>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| format!("({})", v.iter().map(format_q).collect::<Vec<_>>().join(", "))).collect();
    parts.join(" ")
}

fn main() {
    let family = SubspaceFamily::axes(2);
    let cases = [
        ("x1^2 + x2^2", Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)])),
        ("x1*x2", Polynomial::from_int_terms(2, &[(&[1, 1], 1)])),
        ("(x1 + x2)^2", Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)])),
        ("x1*x2 + x1^3", Polynomial::from_int_terms(2, &[(&[1, 1], 1), (&[3, 0], 1)])),
    ];
    for (name, p) in cases {
        let report = analyze(&p, &family);
        println!("P = {name}");
        println!("  degenerate      {}", report.degenerate);
        println!("  relative norm   {:.6}  (squared {})", report.relative_norm, report.relative_norm_squared);
        let parts: Vec<String> = report.minimizers.iter().map(|m| m.to_string()).collect();
        println!("  best fit p_j    [{}]", parts.join(", "));
        if let (Some(d), Some(op)) = (report.nondegenerate_degree, &report.dual_operator) {
            println!("  top nondegenerate degree {d}, dual operator symbol {}", op.symbol());
        }
        match &report.simple_witness {
            Some(w) => println!("  simple witness  {}", vectors(w)),
            None => println!("  simple witness  none"),
        }
    }
}
