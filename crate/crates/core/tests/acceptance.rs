//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line each, and exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num::complex::Complex64;
use num::{BigRational, Zero};
use rand::Rng;

use oscidecay::bilinear::{
    bht_apply, norm_ratio_sweep, quadratic_reduction, random_bump, BilinearPhase, NormRatioConfig, PrincipalValueSpec,
};
use oscidecay::degeneracy::{
    difference_scheme, dual_annihilating_operator, homogeneous_nondegeneracy_reduction, is_degenerate, relative_norm,
    simple_witness, verify_monomial_generators, Coupling,
};
use oscidecay::numeric::{geometric_grid, stream};
use oscidecay::oscillatory::{
    adversarial_functions, decay_sweep, CutoffFunction, FunctionFamily, Integrand, QuadratureSpec, TestFunction,
    TrigPolynomial,
};
use oscidecay::polyalg::{monomials_up_to, Monomial};
use oscidecay::rational::{from_f64, q};
use oscidecay::sublevel::{corner_obstruction_check, sublevel_scaling, Region, SublevelProblem, SubspaceFunction};
use oscidecay::{Polynomial, Subspace, SubspaceFamily, Q};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("degeneracy oracle equivalence", degeneracy_oracle),
        ("nondegenerate iff simply nondegenerate (codim 1, R^3)", simple_nondegeneracy),
        ("three-plane example in R^4", three_plane_example),
        ("difference scheme identity", scheme_identity),
        ("no decay for cancelled degenerate phase", no_decay),
        ("Fresnel decay", fresnel_decay),
        ("nondegenerate decay, worst case over trig tuples", nondegenerate_decay),
        ("sublevel closed form", sublevel_closed_form),
        ("corner obstruction", corner_obstruction),
        ("quadratic reduction exactness", quadratic_reduction_exactness),
        ("cubic phase uniformity probe", uniformity_probe),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failures += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} ({:.1?})",
            if result.pass { "PASS" } else { "FAIL" },
            k + 1,
            result.detail,
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

fn int_poly(dim: usize, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for (e, c) in terms {
        p.add_term(Monomial::new(e.clone()), q(*c));
    }
    p
}

/// Whether `b` lies in the column span of `cols`, by row reduction of `[cols | b]`.
fn in_column_span(cols: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let rows = b.len();
    let width = cols.len() + 1;
    let mut a: Vec<Vec<BigRational>> =
        (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).chain([b[i].clone()]).collect()).collect();
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(pivot_row, p);
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[pivot_row][col];
                for c in col..width {
                    let v = &factor * &a[pivot_row][c];
                    a[r][c] -= v;
                }
            }
        }
        if col == width - 1 {
            // A pivot in the augmented column means the system is inconsistent.
            return false;
        }
        pivot_row += 1;
    }
    true
}

fn degeneracy_oracle() -> Outcome {
    let family = SubspaceFamily::axes(2);
    let basis = monomials_up_to(2, 3);
    // Pullbacks of u^k along each axis are x1^k and x2^k.
    let cols: Vec<Vec<BigRational>> = (0..=3u32)
        .flat_map(|k| [Monomial::new(vec![k, 0]), Monomial::new(vec![0, k])])
        .map(|g| basis.iter().map(|m| if *m == g { q(1) } else { q(0) }).collect())
        .collect();
    let nonconstant: Vec<Monomial> = basis.iter().filter(|m| m.degree() > 0).cloned().collect();
    let total = 3usize.pow(nonconstant.len() as u32);
    let (mut agree, mut degenerate, mut checked) = (0, 0, 0);
    for code in 1..total {
        let mut c = code;
        let mut p = Polynomial::zero(2);
        for m in &nonconstant {
            p.add_term(m.clone(), q((c % 3) as i64 - 1));
            c /= 3;
        }
        let oracle = in_column_span(&cols, &p.coefficients_in(&basis));
        let ours = is_degenerate(&p, &family).is_degenerate();
        checked += 1;
        degenerate += ours as usize;
        agree += (oracle == ours) as usize;
    }
    outcome(agree == checked, format!("{agree}/{checked} agree, {degenerate} degenerate"))
}

fn random_normal<R: Rng>(rng: &mut R) -> Vec<Q> {
    loop {
        let v: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
        if v.iter().any(|&c| c != 0) {
            return v.into_iter().map(q).collect();
        }
    }
}

fn random_poly<R: Rng>(rng: &mut R, dim: usize, degree: u32, density: f64) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for m in monomials_up_to(dim, degree) {
        if rng.gen_bool(density) {
            p.add_term(m, q(rng.gen_range(-3..=3)));
        }
    }
    p
}

fn simple_nondegeneracy() -> Outcome {
    let (mut agree, mut nondegenerate) = (0, 0);
    let instances = 100;
    for i in 0..instances {
        let mut rng = stream(31, &[i]);
        let family = loop {
            let subspaces: Vec<Subspace> =
                (0..4).map(|_| Subspace::from_normals(3, &[random_normal(&mut rng)]).unwrap()).collect();
            if let Ok(f) = SubspaceFamily::new(3, subspaces) {
                break f;
            }
        };
        let p = match i % 3 {
            0 => random_poly(&mut rng, 3, 4, 0.5),
            1 => {
                let d = rng.gen_range(1..=3);
                random_poly(&mut rng, 3, d, 0.6)
            }
            // A degenerate quartic plus a sparse perturbation.
            _ => {
                let mut p = random_poly(&mut rng, 3, 0, 1.0);
                for v in family.subspaces() {
                    p = &p + &v.pullback(&random_poly(&mut rng, 2, 4, 0.4)).unwrap();
                }
                if rng.gen_bool(0.5) {
                    p.add_term(Monomial::new(vec![1, 1, 2]), q(1));
                }
                p
            }
        };
        let nondeg = !is_degenerate(&p, &family).is_degenerate();
        let witness = simple_witness(&p, &family).is_some();
        nondegenerate += nondeg as usize;
        agree += (nondeg == witness) as usize;
    }
    outcome(agree == instances as usize, format!("{agree}/{instances} agree, {nondegenerate} nondegenerate"))
}

fn three_planes() -> SubspaceFamily {
    SubspaceFamily::new(
        4,
        vec![
            Subspace::from_int_basis(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
            Subspace::from_int_basis(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap(),
            Subspace::from_int_basis(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).unwrap(),
        ],
    )
    .unwrap()
}

fn three_plane_example() -> Outcome {
    let family = three_planes();
    let p = int_poly(4, &[(vec![1, 0, 0, 1], 1), (vec![0, 1, 1, 0], -1)]);
    let nondeg = !is_degenerate(&p, &family).is_degenerate();
    let no_witness = simple_witness(&p, &family).is_none();
    let expected = int_poly(4, &[(vec![1, 0, 0, 1], 1), (vec![0, 1, 1, 0], -1)]);
    let symbol_match = match dual_annihilating_operator(&p, &family) {
        Ok(Some(op)) => {
            let s = op.symbol();
            let c = s.coefficient(&Monomial::new(vec![1, 0, 0, 1]));
            !c.is_zero() && *s == expected.scale(&c)
        }
        _ => false,
    };
    let f = |c: [i64; 4]| c.iter().map(|&v| q(v)).collect::<Vec<Q>>();
    let forms = vec![
        vec![f([1, 0, 0, 0]), f([0, 1, 0, 0])],
        vec![f([0, 0, 1, 0]), f([0, 0, 0, 1])],
        vec![f([1, 0, -1, 0]), f([0, 1, 0, -1])],
    ];
    let ideal = verify_monomial_generators(&family, &forms).unwrap_or(false);
    outcome(
        nondeg && no_witness && symbol_match && ideal,
        format!("nondegenerate {nondeg}, no simple witness {no_witness}, symbol matches {symbol_match}, 8 products in ideal {ideal}"),
    )
}

fn scheme_instance(i: u64) -> (Polynomial, SubspaceFamily) {
    let mut rng = stream(41, &[i]);
    match i % 4 {
        0 => (random_poly(&mut rng, 2, 3, 0.6), SubspaceFamily::axes(2)),
        1 => (random_poly(&mut rng, 3, 3, 0.4), SubspaceFamily::axes(3)),
        2 => {
            let family = loop {
                let subspaces: Vec<Subspace> =
                    (0..3).map(|_| Subspace::from_normals(3, &[random_normal(&mut rng)]).unwrap()).collect();
                if let Ok(f) = SubspaceFamily::new(3, subspaces) {
                    break f;
                }
            };
            (random_poly(&mut rng, 3, 3, 0.4), family)
        }
        _ => {
            let family = three_planes();
            let mut p = int_poly(4, &[(vec![1, 0, 0, 1], 1), (vec![0, 1, 1, 0], -1)]).scale(&q(rng.gen_range(1..=3)));
            for v in family.subspaces() {
                p = &p + &v.pullback(&random_poly(&mut rng, 2, 2, 0.5)).unwrap();
            }
            (p, family)
        }
    }
}

fn scheme_identity() -> Outcome {
    let (mut trials, mut worst, mut skipped) = (0, 0.0f64, 0);
    let mut i = 0;
    while trials < 200 {
        let (p, family) = scheme_instance(i);
        i += 1;
        let Some((_, top)) = homogeneous_nondegeneracy_reduction(&p, &family) else {
            skipped += 1;
            continue;
        };
        let Ok(scheme) = difference_scheme(&top, &family) else {
            skipped += 1;
            continue;
        };
        let mut rng = stream(43, &[i]);
        let trig: Vec<TrigPolynomial> =
            family.subspaces().iter().map(|v| TrigPolynomial::random(v.dimension(), 2, &mut rng)).collect();
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
        let x: Vec<f64> = (0..p.dimension()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut r: Vec<f64> = scheme.generators().iter().map(|_| rng.gen_range(0.1..1.0)).collect();
        if scheme.coupling() == Coupling::Coupled {
            let s = r[0];
            r.iter_mut().for_each(|v| *v = s);
        }
        let value = scheme.apply(g, &x, &r).unwrap();
        worst = worst.max((value - 1.0).abs());
        trials += 1;
    }
    outcome(worst < 1e-8, format!("{trials} instances, max |apply - 1| = {worst:.2e} ({skipped} degenerate draws skipped)"))
}

fn no_decay() -> Outcome {
    let family = SubspaceFamily::axes(2);
    let p = int_poly(2, &[(vec![1, 0], 1), (vec![0, 2], 1)]);
    let fit = relative_norm(&p, &family);
    let functions = FunctionFamily::Fixed { functions: adversarial_functions(&fit.minimizers) };
    let lambdas = geometric_grid(1.0, 4096.0, 13);
    let sweep =
        decay_sweep(&p, &family, &functions, &CutoffFunction::unit(2), &lambdas, &QuadratureSpec::default()).unwrap();
    let base = sweep.values[0].norm();
    let dev = sweep.values.iter().map(|v| (v.norm() - base).abs() / base).fold(0.0, f64::max);
    outcome(dev < 1e-6, format!("max relative deviation {dev:.2e} over 13 lambdas, |Lambda_1| = {base:.6}"))
}

/// Composite Simpson on `[-1, 1]` with `2^22` intervals.
fn simpson_fresnel(lambda: f64, cutoff: &CutoffFunction) -> Complex64 {
    let n = 1usize << 22;
    let h = 2.0 / n as f64;
    let f = |x: f64| Complex64::cis(lambda * x * x) * cutoff.eval(&[x]);
    let mut acc = f(-1.0) + f(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(-1.0 + k as f64 * h) * w;
    }
    acc * (h / 3.0)
}

fn fresnel_decay() -> Outcome {
    let p = int_poly(1, &[(vec![2], 1)]);
    let family = SubspaceFamily::empty(1);
    let cutoff = CutoffFunction::unit(1).with_order(6);
    let spec = QuadratureSpec::default();
    let lambdas = geometric_grid(16.0, 4096.0, 9);
    let sweep = decay_sweep(&p, &family, &FunctionFamily::Fixed { functions: vec![] }, &cutoff, &lambdas, &spec).unwrap();
    let Some(fit) = sweep.fit else { return outcome(false, "no fit".into()) };
    let dense = QuadratureSpec { nodes_per_wavelength: 4 * spec.nodes_per_wavelength, ..spec.clone() };
    let integrand = Integrand::new(&p, &family, &[], &cutoff).unwrap();
    let (mut dense_err, mut simpson_err) = (0.0f64, 0.0f64);
    for (l, v) in sweep.lambdas.iter().zip(&sweep.values) {
        let reference = integrand.evaluate(*l, &dense).unwrap().value;
        dense_err = dense_err.max((v - reference).norm() / reference.norm());
        if [64.0, 256.0, 1024.0].contains(l) {
            let s = simpson_fresnel(*l, &cutoff);
            simpson_err = simpson_err.max((v - s).norm() / s.norm());
        }
    }
    let pass = (0.45..=0.55).contains(&fit.epsilon) && fit.r2 >= 0.98 && dense_err < 1e-6 && simpson_err < 1e-6;
    outcome(
        pass,
        format!(
            "epsilon_hat {:.4}, r2 {:.5}, vs 4x density {dense_err:.1e}, vs Simpson {simpson_err:.1e}",
            fit.epsilon, fit.r2
        ),
    )
}

fn nondegenerate_decay() -> Outcome {
    let p = int_poly(2, &[(vec![1, 1], 1)]);
    let functions = FunctionFamily::RandomTrig { degree: 3, samples: 8, seed: 1 };
    let lambdas = geometric_grid(1.0, 1024.0, 11);
    let sweep = decay_sweep(
        &p,
        &SubspaceFamily::axes(2),
        &functions,
        &CutoffFunction::unit(2),
        &lambdas,
        &QuadratureSpec::default(),
    )
    .unwrap();
    let Some(fit) = sweep.fit else { return outcome(false, "no fit".into()) };
    outcome(
        fit.epsilon >= 0.25 && fit.r2 >= 0.9 && sweep.all_converged(),
        format!("epsilon_hat {:.4}, r2 {:.4}, {} fit points, all converged {}", fit.epsilon, fit.r2, fit.points, sweep.all_converged()),
    )
}

fn sublevel_closed_form() -> Outcome {
    let prob = SublevelProblem {
        polynomial: int_poly(2, &[(vec![1, 1], 1)]),
        family: SubspaceFamily::axes(2),
        functions: vec![SubspaceFunction::Zero; 2],
        region: Region::cube(2, 0.0, 1.0),
        epsilon: 1e-2,
    };
    let epsilons = geometric_grid(1e-1, 1e-3, 5);
    let scaling = sublevel_scaling(&prob, &epsilons, 1_000_000, 8).unwrap();
    let mut within = true;
    let mut zs = Vec::new();
    for e in scaling.estimates.iter().step_by(2) {
        let exact = e.epsilon * (1.0 - e.epsilon.ln());
        let z = (e.estimate - exact) / e.standard_error;
        within &= z.abs() <= 3.0;
        zs.push(format!("{:.0e}: z={z:+.2}", e.epsilon));
    }
    let Some(fit) = scaling.fit else { return outcome(false, "no fit".into()) };
    outcome(
        within && (0.75..=1.0).contains(&fit.delta),
        format!("{}, delta_hat {:.4}", zs.join(", "), fit.delta),
    )
}

fn corner_obstruction() -> Outcome {
    let p = int_poly(2, &[(vec![1, 1], 1)]);
    let family = SubspaceFamily::axes(2);
    let scheme = difference_scheme(&p, &family).unwrap();
    let mut rng = stream(51, &[]);
    let prob = SublevelProblem {
        polynomial: p,
        family,
        functions: (0..2)
            .map(|_| SubspaceFunction::Test(TestFunction::TrigPolynomial(TrigPolynomial::random(1, 3, &mut rng))))
            .collect(),
        region: Region::cube(2, -1.0, 1.0),
        epsilon: 1e-4,
    };
    let report = corner_obstruction_check(&scheme, &prob, 100_000, 52).unwrap();
    outcome(
        report.violations == 0,
        format!(
            "{} violations in {} trials, scale bound {:.4}, closest max-corner residual/eps {:.2}",
            report.violations, report.trials, report.bound, report.closest_margin
        ),
    )
}

fn quadratic_reduction_exactness() -> Outcome {
    let spec = PrincipalValueSpec::default();
    let xs: Vec<f64> = (0..65).map(|k| -2.0 + 4.0 * k as f64 / 64.0).collect();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let mut rng = stream(61, &[i]);
        let mut p = Polynomial::zero(2);
        for e in [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2]] {
            p.add_term(Monomial::new(e.to_vec()), from_f64(rng.gen_range(-8.0..8.0)));
        }
        let f = random_bump(&mut rng, spec.outer);
        let g = random_bump(&mut rng, spec.outer);
        let phase = BilinearPhase::new(p, 2).unwrap();
        let red = quadratic_reduction(&phase).unwrap();
        let direct = bht_apply(&phase, &f, &g, &xs, &spec).unwrap();
        let reduced = bht_apply(&BilinearPhase::zero(), &red.modulate_f(f), &red.modulate_g(g), &xs, &spec).unwrap();
        let scale = reduced.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let diff = direct.values.iter().zip(&reduced.values).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max);
        worst = worst.max(diff / scale);
    }
    outcome(worst < 1e-4, format!("20 phases, max relative discrepancy {worst:.2e}"))
}

fn uniformity_probe() -> Outcome {
    let report = norm_ratio_sweep(&NormRatioConfig::new(3, 2.0, 2.0)).unwrap();
    let Some(slope) = report.slope_vs_scale else { return outcome(false, "no slope".into()) };
    outcome(
        (-0.1..=0.1).contains(&slope) && !report.flagged,
        format!("slope {slope:.4}, max ratio {:.4}, flagged {}", report.max_ratio, report.flagged),
    )
}

fn run_cli(dir: &Path, out: &str, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_oscidecay"))
        .current_dir(dir)
        .args(args)
        .args(["--out", out])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.filter_map(|e| e.ok())
                .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let xy = r#"{"dimension":2,"polynomial":{"dimension":2,"terms":[{"exponents":[1,1],"coeff":"1"}]},
        "subspaces":[{"basis":[["1","0"]]},{"basis":[["0","1"]]}]}"#;
    let steps = r#"{"dimension":1,"polynomial":{"dimension":1,"terms":[]},"subspaces":[{"basis":[["1"]]}],
        "functions":[{"kind":"alternating_steps","lo":-1.0,"hi":1.0,"steps":16}]}"#;
    std::fs::write(dir.path().join("xy.json"), xy).unwrap();
    std::fs::write(dir.path().join("steps.json"), steps).unwrap();
    let runs: [&[&str]; 6] = [
        &["analyze", "xy.json"],
        &["witness", "xy.json"],
        &["decay", "xy.json", "--family", "random", "--samples", "2", "--lambda-max", "32", "--points", "6", "--seed", "3"],
        &["sublevel", "xy.json", "--samples", "200000", "--seed", "3"],
        &["bht", "--trials", "2", "--scale-max", "8", "--grid-points", "33", "--seed", "3"],
        &["uniformity", "steps.json", "--lambda", "16"],
    ];
    let mut failed = Vec::new();
    for args in runs {
        let mut outputs = Vec::new();
        for (k, threads) in ["1", "2", "2"].iter().enumerate() {
            let out = format!("out_{}_{k}", args[0]);
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--threads", threads]);
            if !run_cli(dir.path(), &out, &full) {
                failed.push(format!("{} exited nonzero", args[0]));
            }
            outputs.push(snapshot(&dir.path().join(&out)));
        }
        if outputs[0].is_empty() || outputs.iter().any(|o| *o != outputs[0]) {
            failed.push(format!("{} outputs differ", args[0]));
        }
    }
    let detail = if failed.is_empty() {
        "6 subcommands, threads 1/2/2, byte-identical outputs".to_string()
    } else {
        failed.join("; ")
    };
    outcome(failed.is_empty(), detail)
}
