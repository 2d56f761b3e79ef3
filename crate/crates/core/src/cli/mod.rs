//! Batch front end: `oscidecay <subcommand> [problem.json] [flags]`.
//!
//! Every run writes `manifest.json` plus the subcommand's CSV/JSON outputs to
//! `--out`, and each output carries the digest of the manifest. Exit codes:
//! 0 success, 1 I/O failure, 2 malformed input, 3 non-convergence under `--strict`.

mod problem;

pub use problem::{Problem, ProblemFile};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bilinear::{norm_ratio_sweep, phase_monomials, NormRatioConfig, PrincipalValueSpec};
use crate::degeneracy::{analyze, difference_scheme, homogeneous_nondegeneracy_reduction, relative_norm, simple_witness};
use crate::error::Error;
use crate::numeric::{geometric_grid, with_threads};
use crate::oscillatory::{
    adversarial_functions, decay_sweep, uniformity_scan, CoefficientGrid, CutoffFunction, FunctionFamily,
    QuadratureSpec, SampledFunction, TestFunction,
};
use crate::polyalg::{vector_to_json, PolynomialJson};
use crate::rational;
use crate::sublevel::{sublevel_scaling, Region, SublevelProblem, SubspaceFunction};

#[derive(Parser, Debug)]
#[command(name = "oscidecay", version, about = "Polynomial degeneracy and oscillatory-integral diagnostics")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Exit with status 3 if any numerical estimate failed to converge.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads (default: OSCIDECAY_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degeneracy, relative norm, dual operator and simple witness.
    Analyze(ProblemArg),
    /// Witness operators for the top nondegenerate homogeneous summand.
    Witness(ProblemArg),
    /// Decay sweep of the oscillatory functional and fitted exponent.
    Decay(DecayArgs),
    /// Monte Carlo sublevel-set measures and fitted exponent.
    Sublevel(SublevelArgs),
    /// Norm-ratio sweep of the bilinear Hilbert transform with polynomial phase.
    Bht(BhtArgs),
    /// Generalized Fourier coefficient scan of the first function.
    Uniformity(UniformityArgs),
}

#[derive(Args, Debug, Serialize)]
struct ProblemArg {
    #[serde(skip)]
    problem: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FamilyKind {
    /// The problem's functions, or the constant 1 when absent.
    Fixed,
    /// Worst of several random trigonometric tuples.
    Random,
    /// Modulations by the best-fit decomposition.
    Adversarial,
}

#[derive(Args, Debug, Serialize)]
struct DecayArgs {
    #[serde(skip)]
    problem: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    lambda_min: f64,
    #[arg(long, default_value_t = 4096.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 13)]
    points: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = FamilyKind::Fixed)]
    family: FamilyKind,
    #[arg(long, default_value_t = 3)]
    trig_degree: u32,
    #[arg(long, default_value_t = 8)]
    samples: usize,
}

#[derive(Args, Debug, Serialize)]
struct SublevelArgs {
    #[serde(skip)]
    problem: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    eps_max: f64,
    #[arg(long, default_value_t = 0.001)]
    eps_min: f64,
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Subtract the best-fit decomposition instead of the problem's functions.
    #[arg(long)]
    adversarial: bool,
}

#[derive(Args, Debug, Serialize)]
struct BhtArgs {
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, default_value_t = 2.0)]
    p1: f64,
    #[arg(long, default_value_t = 2.0)]
    p2: f64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1024.0)]
    scale_max: f64,
    #[arg(long, default_value_t = 129)]
    grid_points: usize,
}

#[derive(Args, Debug, Serialize)]
struct UniformityArgs {
    #[serde(skip)]
    problem: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
}

/// Failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn io_failure(e: std::io::Error, path: &Path) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

/// Reproducibility record; thread count is deliberately absent because it
/// never changes the outputs.
#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Value,
    pub seed: u64,
    pub version: String,
    pub input_digest: String,
}

impl RunManifest {
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("manifest serializes")))
    }
}

struct Output {
    dir: PathBuf,
    digest: String,
    warnings: Vec<String>,
    converged: bool,
}

impl Output {
    fn write(&self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| io_failure(e, &path))
    }

    fn json(&self, name: &str, mut value: Value) -> Result<(), Failure> {
        if let Value::Object(map) = &mut value {
            map.insert("manifest_digest".into(), Value::String(self.digest.clone()));
        }
        self.write(name, &(serde_json::to_string_pretty(&value).expect("json") + "\n"))
    }

    fn csv(&self, name: &str, header: &str, rows: &[String]) -> Result<(), Failure> {
        let mut text = format!("# manifest_digest={}\n{header}\n", self.digest);
        for row in rows {
            text.push_str(row);
            text.push('\n');
        }
        self.write(name, &text)
    }
}

fn read_problem(path: &Path) -> Result<(Problem, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| io_failure(e, path))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure { code: 2, message: format!("{}: not UTF-8", path.display()) })?;
    Ok((ProblemFile::parse(&text)?, hex::encode(Sha256::digest(&bytes))))
}

fn warn_unused(problem: &ProblemFile, used: &[&str], warnings: &mut Vec<String>) {
    for section in problem.sections() {
        if !used.contains(&section) {
            warnings.push(format!("warning: section '{section}' is not used by this subcommand"));
        }
    }
}

fn polynomial_json(p: &crate::polyalg::Polynomial) -> Value {
    serde_json::to_value(PolynomialJson::from(p)).expect("json")
}

fn vectors_json(vs: &[Vec<crate::rational::Q>]) -> Value {
    json!(vs.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>())
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("OSCIDECAY_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    match with_threads(threads, || execute(&cli)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let (name, parameters, problem) = match &cli.command {
        Command::Analyze(a) => ("analyze", to_value(a), Some(read_problem(&a.problem)?)),
        Command::Witness(a) => ("witness", to_value(a), Some(read_problem(&a.problem)?)),
        Command::Decay(a) => ("decay", to_value(a), Some(read_problem(&a.problem)?)),
        Command::Sublevel(a) => ("sublevel", to_value(a), Some(read_problem(&a.problem)?)),
        Command::Bht(a) => ("bht", to_value(a), None),
        Command::Uniformity(a) => ("uniformity", to_value(a), Some(read_problem(&a.problem)?)),
    };
    let (problem, input_digest) = match problem {
        Some((p, d)) => (Some(p), d),
        None => (None, String::new()),
    };
    let manifest = RunManifest {
        subcommand: name.into(),
        parameters,
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION").into(),
        input_digest,
    };
    std::fs::create_dir_all(&cli.out).map_err(|e| io_failure(e, &cli.out))?;
    let mut out = Output { dir: cli.out.clone(), digest: manifest.digest(), warnings: Vec::new(), converged: true };
    match (&cli.command, problem.as_ref()) {
        (Command::Analyze(_), Some(p)) => run_analyze(p, &mut out)?,
        (Command::Witness(_), Some(p)) => run_witness(p, &mut out)?,
        (Command::Decay(a), Some(p)) => run_decay(a, cli.seed, p, &mut out)?,
        (Command::Sublevel(a), Some(p)) => run_sublevel(a, cli.seed, p, &mut out)?,
        (Command::Bht(a), None) => run_bht(a, cli.seed, &mut out)?,
        (Command::Uniformity(a), Some(p)) => run_uniformity(a, p, &mut out)?,
        _ => unreachable!("problem file presence matches the subcommand"),
    }
    let manifest_text = serde_json::to_string_pretty(&manifest).expect("json") + "\n";
    out.write("manifest.json", &manifest_text)?;
    for w in &out.warnings {
        eprintln!("{w}");
    }
    print!("{manifest_text}");
    Ok(if cli.strict && !out.converged { 3 } else { 0 })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("arguments serialize")
}

fn run_analyze(p: &Problem, out: &mut Output) -> Result<(), Failure> {
    warn_unused(&p.file, &[], &mut out.warnings);
    let report = analyze(&p.file.polynomial, &p.family);
    out.json(
        "analyze.json",
        json!({
            "degenerate": report.degenerate,
            "relative_norm": format!("{}", report.relative_norm),
            "relative_norm_squared": rational::format_q(&report.relative_norm_squared),
            "minimizers": report.minimizers.iter().map(polynomial_json).collect::<Vec<_>>(),
            "dual_operator_symbol": report.dual_operator.as_ref().map(|d| polynomial_json(d.symbol())),
            "nondegenerate_degree": report.nondegenerate_degree,
            "simple_witness": report.simple_witness.as_deref().map(vectors_json),
        }),
    )
}

fn run_witness(p: &Problem, out: &mut Output) -> Result<(), Failure> {
    warn_unused(&p.file, &[], &mut out.warnings);
    let top = homogeneous_nondegeneracy_reduction(&p.file.polynomial, &p.family);
    let scheme = match &top {
        Some((_, part)) => match difference_scheme(part, &p.family) {
            Ok(s) => Some(s),
            Err(Error::NoSchemeFound) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let scheme_json = scheme.as_ref().map(|s| {
        json!({
            "degree": s.degree(),
            "coupling": s.coupling(),
            "route": s.route(),
            "normalization": rational::format_q(s.normalization()),
            "corner_constant": format!("{}", s.corner_constant()),
            "generators": vectors_json(s.generators()),
            "terms": s.terms().iter().map(|t| json!({
                "coefficient": rational::format_q(&t.coefficient),
                "generators": t.generators,
            })).collect::<Vec<_>>(),
        })
    });
    out.json(
        "witness.json",
        json!({
            "top_degree": top.as_ref().map(|(d, _)| *d),
            "top_summand": top.as_ref().map(|(_, q)| polynomial_json(q)),
            "simple_witness": simple_witness(&p.file.polynomial, &p.family).as_deref().map(vectors_json),
            "difference_scheme": scheme_json,
        }),
    )
}

fn cutoff_or_default(p: &Problem) -> CutoffFunction {
    p.file.cutoff.clone().unwrap_or_else(|| CutoffFunction::unit(p.family.ambient()))
}

fn run_decay(a: &DecayArgs, seed: u64, p: &Problem, out: &mut Output) -> Result<(), Failure> {
    if a.points < 6 {
        return Err(Error::InvalidParameter(format!("--points must be at least 6, got {}", a.points)).into());
    }
    if !(a.lambda_min >= 1.0 && a.lambda_max > a.lambda_min) {
        return Err(Error::InvalidParameter("need 1 <= lambda-min < lambda-max".into()).into());
    }
    let functions = match a.family {
        FamilyKind::Fixed => {
            warn_unused(&p.file, &["cutoff", "functions"], &mut out.warnings);
            let fs = p.file.functions.clone().unwrap_or_else(|| vec![TestFunction::ConstantOne; p.family.len()]);
            FunctionFamily::Fixed { functions: fs }
        }
        FamilyKind::Random => {
            warn_unused(&p.file, &["cutoff"], &mut out.warnings);
            FunctionFamily::RandomTrig { degree: a.trig_degree, samples: a.samples, seed }
        }
        FamilyKind::Adversarial => {
            warn_unused(&p.file, &["cutoff"], &mut out.warnings);
            let fit = relative_norm(&p.file.polynomial, &p.family);
            FunctionFamily::Fixed { functions: adversarial_functions(&fit.minimizers) }
        }
    };
    let spec = QuadratureSpec { relative_tolerance: a.tolerance, ..QuadratureSpec::default() };
    let lambdas = geometric_grid(a.lambda_min, a.lambda_max, a.points);
    let sweep = decay_sweep(&p.file.polynomial, &p.family, &functions, &cutoff_or_default(p), &lambdas, &spec)?;
    let rows: Vec<String> = sweep
        .lambdas
        .iter()
        .zip(&sweep.values)
        .zip(&sweep.converged)
        .map(|((l, v), c)| format!("{l},{},{},{},{c}", v.re, v.im, v.norm()))
        .collect();
    out.csv("decay.csv", "lambda,re,im,abs,converged", &rows)?;
    out.converged &= sweep.all_converged() && sweep.fit.is_some();
    out.json(
        "decay.json",
        json!({
            "epsilon_hat": sweep.fit.map(|f| f.epsilon),
            "intercept": sweep.fit.map(|f| f.intercept),
            "r2": sweep.fit.map(|f| f.r2),
            "fit_points": sweep.fit.map(|f| f.points),
            "all_converged": sweep.all_converged(),
        }),
    )
}

fn run_sublevel(a: &SublevelArgs, seed: u64, p: &Problem, out: &mut Output) -> Result<(), Failure> {
    if a.points < 4 {
        return Err(Error::InvalidParameter(format!("--points must be at least 4, got {}", a.points)).into());
    }
    if !(a.eps_max > a.eps_min && a.eps_min > 0.0) {
        return Err(Error::InvalidParameter("need 0 < eps-min < eps-max".into()).into());
    }
    let functions = if a.adversarial {
        warn_unused(&p.file, &["region"], &mut out.warnings);
        relative_norm(&p.file.polynomial, &p.family).minimizers.into_iter().map(SubspaceFunction::Polynomial).collect()
    } else {
        warn_unused(&p.file, &["region", "functions"], &mut out.warnings);
        match &p.file.functions {
            Some(fs) => fs.iter().cloned().map(SubspaceFunction::Test).collect(),
            None => vec![SubspaceFunction::Zero; p.family.len()],
        }
    };
    let m = p.family.ambient();
    let region = p.file.region.clone().unwrap_or_else(|| Region::cube(m, 0.0, 1.0));
    let mut epsilons = geometric_grid(a.eps_min, a.eps_max, a.points);
    epsilons.reverse();
    let prob = SublevelProblem {
        polynomial: p.file.polynomial.clone(),
        family: p.family.clone(),
        functions,
        region,
        epsilon: a.eps_max,
    };
    let scaling = sublevel_scaling(&prob, &epsilons, a.samples, seed)?;
    let rows: Vec<String> = scaling
        .estimates
        .iter()
        .map(|e| format!("{},{},{},{}", e.epsilon, e.estimate, e.standard_error, e.hits))
        .collect();
    out.csv("sublevel.csv", "eps,estimate,stderr,hits", &rows)?;
    out.converged &= scaling.fit.is_some();
    out.json(
        "sublevel.json",
        json!({
            "delta_hat": scaling.fit.map(|f| f.delta),
            "r2": scaling.fit.map(|f| f.r2),
            "fit_points": scaling.fit.map(|f| f.points),
        }),
    )
}

fn run_bht(a: &BhtArgs, seed: u64, out: &mut Output) -> Result<(), Failure> {
    if !(a.scale_max >= 1.0) {
        return Err(Error::InvalidParameter("--scale-max must be at least 1".into()).into());
    }
    let steps = a.scale_max.log2().floor() as i32;
    let config = NormRatioConfig {
        scales: (0..=steps).map(|k| 2f64.powi(k)).collect(),
        trials_per_scale: a.trials,
        seed,
        grid_points: a.grid_points,
        spec: PrincipalValueSpec::default(),
        ..NormRatioConfig::new(a.degree, a.p1, a.p2)
    };
    let report = norm_ratio_sweep(&config)?;
    let names: Vec<String> = phase_monomials(a.degree)
        .iter()
        .map(|m| format!("coef_{}_{}", m.exponents()[0], m.exponents()[1]))
        .collect();
    let mut header = String::from("trial,scale");
    for n in &names {
        let _ = write!(header, ",{n}");
    }
    header.push_str(",ratio,flagged");
    let rows: Vec<String> = report
        .samples
        .iter()
        .map(|s| {
            let mut row = format!("{},{}", s.trial, s.scale);
            for c in &s.coefficients {
                let _ = write!(row, ",{c}");
            }
            let _ = write!(row, ",{},{}", s.ratio, s.flagged);
            row
        })
        .collect();
    out.csv("bht.csv", &header, &rows)?;
    out.converged &= !report.flagged;
    out.json(
        "bht.json",
        json!({
            "max_ratio": report.max_ratio,
            "slope_vs_scale": report.slope_vs_scale,
            "q": report.q,
            "per_scale_max": report.per_scale_max,
            "flagged": report.flagged,
        }),
    )
}

fn run_uniformity(a: &UniformityArgs, p: &Problem, out: &mut Output) -> Result<(), Failure> {
    warn_unused(&p.file, &["functions", "interval"], &mut out.warnings);
    let f = p
        .file
        .functions
        .as_ref()
        .and_then(|fs| fs.first())
        .ok_or_else(|| Error::InvalidParameter("uniformity needs at least one function".into()))?;
    let (lo, hi) = p.file.interval.unwrap_or((-1.0, 1.0));
    let grid = CoefficientGrid::default();
    // Enough midpoints for the scan, rounded up to a multiple of 64 so
    // piecewise-constant inputs with dyadic cells are sampled cell-aligned.
    let n = grid.required_samples(a.lambda, a.degree, lo, hi).next_multiple_of(64);
    let samples = SampledFunction::from_fn(lo, hi, n, |x| f.value(&[x], a.lambda));
    let report = uniformity_scan(&samples, a.lambda, a.degree, a.tau, &grid)?;
    out.json(
        "uniformity.json",
        json!({
            "lambda": report.lambda,
            "degree": report.degree,
            "tau": report.tau,
            "max_coefficient": report.max_coefficient,
            "classification": report.classification,
            "best_coefficients": report.best_coefficients,
            "best_c": [report.best_c.re, report.best_c.im],
            "l2_norm": report.l2_norm,
            "residual_norm": report.residual_norm,
            "threshold": report.threshold,
            "phases_scanned": report.phases_scanned,
            "samples": n,
        }),
    )
}
