//! `cartheta`: fiber descriptors, representation checks and isomorphism
//! verdicts for twisted CAR algebras, as JSON on standard output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cartheta::car::{build_tau_x, fock_car_theta, number_operator_spectra, verify_car_relations};
use cartheta::classify::{classification_report, classify_n2, Status, Verdict};
use cartheta::fibers::fiber_descriptor;
use cartheta::graded::{
    check_double_deformation, decompose_homogeneous, homogeneous_phase, rieffel_twist, GradedSpace, SkewMatrix,
};
use cartheta::numerics::{Real, Residual, Scalar, DEFAULT_TOL};
use cartheta::selftest::run_selftest;
use cartheta::torus::{default_bound, distinguish_trace_ranges, trace_range};
use cartheta::Error;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

/// Spectra are floating-point even on the exact path; never compare them
/// more tightly than this.
const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "cartheta", version, about = "Twisted CAR algebras at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Face signature and fiber catalog entry at a hypercube point.
    Fiber {
        #[arg(long)]
        theta: PathBuf,
        /// Comma-separated coordinates, each "p/q" or a float.
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        x: Option<String>,
        /// Sweep every point of {0, STEP, 2·STEP, …} ∩ [0, 1/2] in each coordinate.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Build τ_x and check the defining relations and number-operator spectra.
    Verify {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Two generators: isomorphic iff θ₁ ≡ ±θ₂ mod ℤ.
    Classify2 {
        #[arg(long = "theta1", value_name = "VAL")]
        theta1_flag: Option<String>,
        #[arg(long = "theta2", value_name = "VAL")]
        theta2_flag: Option<String>,
        /// `θ₁ θ₂` as positional values.
        #[arg(num_args = 0..=2, allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// General n: necessary condition, signed-permutation certificate, or UNDECIDED.
    Classify {
        #[arg(long)]
        theta1: PathBuf,
        #[arg(long)]
        theta2: PathBuf,
    },
    /// Trace values on projections of the halved tori.
    TraceRange {
        /// Deformation parameter "p/q".
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value_t = 0)]
        halvings: u32,
        /// Compare the sets for halvings 0..=N instead of listing one.
        #[arg(long)]
        distinguish: Option<u32>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Double-deformation and cocycle identities on the Fock generators and
    /// their pairwise products.
    DeformCheck {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Seeded invariant suites.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iters: usize,
    },
}

struct Failure {
    code: u8,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error {
            Error::Parse(_) => 2,
            Error::IncompatibleDenominator { .. } | Error::IncompatibleCyclicGrading { .. } => 4,
            _ => 3,
        };
        Failure { code, error }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("CAR_THETA_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0)
            .ok_or_else(|| Error::Parse(format!("CAR_THETA_TOL={s:?} is not a tolerance")).into()),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn read_theta(path: &Path) -> Result<SkewMatrix, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn parse_point(s: &str) -> Result<Vec<Real>, Failure> {
    s.split(',').map(|v| v.parse::<Real>().map_err(Failure::from)).collect()
}

/// All points of `{0, step, 2·step, …} ∩ [0, ½]` in `n` coordinates, in
/// lexicographic order.
fn grid_points(n: usize, step: Real) -> Result<Vec<Vec<Real>>, Failure> {
    if step.cmp_value(&Real::zero()).is_le() {
        return Err(Error::Domain(format!("grid step {step} must be positive")).into());
    }
    let mut values = vec![Real::zero()];
    loop {
        let next = *values.last().expect("nonempty") + step;
        if next.cmp_value(&Real::ratio(1, 2)).is_gt() && !next.approx_eq(&Real::ratio(1, 2), 1e-12) {
            break;
        }
        values.push(next);
        if values.len() > 1000 {
            return Err(Error::SizeLimit("grid step too small".into()).into());
        }
    }
    let total = values.len().checked_pow(n as u32).filter(|&t| t <= 100_000);
    let total = total.ok_or_else(|| Error::SizeLimit("grid has too many points".into()))?;
    Ok((0..total)
        .map(|mut idx| {
            let mut p = vec![Real::zero(); n];
            for slot in (0..n).rev() {
                p[slot] = values[idx % values.len()];
                idx /= values.len();
            }
            p
        })
        .collect())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run_fiber(theta: &Path, x: Option<&str>, grid: Option<&str>) -> Outcome {
    let theta = read_theta(theta)?;
    if let Some(step) = grid {
        let step: Real = step.parse()?;
        let out = grid_points(theta.n(), step)?
            .iter()
            .map(|p| fiber_descriptor(&theta, p).map(|d| to_value(&d)))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((Value::Array(out), 0));
    }
    let x = parse_point(x.expect("clap requires --x or --grid"))?;
    Ok((to_value(&fiber_descriptor(&theta, &x)?), 0))
}

fn run_verify(theta: &Path, x: &str, q: u64, tol: Option<f64>) -> Outcome {
    let theta = read_theta(theta)?;
    let tol = tolerance(tol)?;
    let rep = build_tau_x(&theta, &parse_point(x)?, q)?;
    let car = verify_car_relations(&rep, tol);
    let spectra = number_operator_spectra(&rep, tol.max(SPECTRUM_TOL))?;
    let pass = car.pass && spectra.pass;
    let out = json!({
        "n": rep.n(),
        "dim": rep.dim(),
        "exact": rep.is_exact(),
        "torusLevel": q,
        "point": rep.point,
        "relations": car,
        "spectra": spectra,
        "pass": pass,
    });
    Ok((out, if pass { 0 } else { 1 }))
}

fn verdict_outcome(v: Verdict) -> Outcome {
    let code = match v.status {
        Status::Isomorphic => 0,
        Status::NotIsomorphic => 1,
        Status::Undecided => 5,
    };
    Ok((to_value(&v), code))
}

fn run_classify2(flag1: Option<String>, flag2: Option<String>, values: Vec<String>) -> Outcome {
    let mut rest = values.into_iter();
    let mut take = |flag: Option<String>, name: &str| {
        flag.or_else(|| rest.next()).ok_or_else(|| Failure::from(Error::Parse(format!("missing {name}"))))
    };
    let t1: Real = take(flag1, "theta1")?.parse()?;
    let t2: Real = take(flag2, "theta2")?.parse()?;
    if rest.next().is_some() {
        return Err(Error::Parse("too many values".into()).into());
    }
    verdict_outcome(classify_n2(t1, t2, tolerance(None)?))
}

fn run_classify(theta1: &Path, theta2: &Path) -> Outcome {
    let (t1, t2) = (read_theta(theta1)?, read_theta(theta2)?);
    verdict_outcome(classification_report(&t1, &t2, tolerance(None)?)?)
}

fn run_trace_range(theta: &str, halvings: u32, distinguish: Option<u32>, bound: Option<u64>) -> Outcome {
    let theta = match theta.parse::<Real>()? {
        Real::Exact(r) => r,
        Real::Approx(v) => {
            return Err(Error::NotExact(format!("trace ranges need a rational parameter, got {v}")).into())
        }
    };
    let out = match distinguish {
        Some(n) => {
            let bound = bound.unwrap_or_else(|| default_bound(theta, n));
            to_value(&distinguish_trace_ranges(theta, n, bound)?)
        }
        None => {
            let bound = bound.unwrap_or_else(|| default_bound(theta, halvings));
            to_value(&trace_range(theta, halvings, bound)?)
        }
    };
    Ok((out, 0))
}

fn residual_json(r: &Residual) -> Value {
    json!({ "maxAbs": r.max_abs, "exact": r.exact })
}

fn run_deform_check(theta: &Path, tol: Option<f64>) -> Outcome {
    let theta = read_theta(theta)?;
    let tol = tolerance(tol)?;
    let n = theta.n();
    let space = GradedSpace::fock(n);
    let gens = fock_car_theta(&SkewMatrix::zeros(n)).generators.to_complex();
    let mut ops = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        ops.push((format!("a{}", i + 1), g.clone()));
        ops.push((format!("A{}", i + 1), g.adjoint()));
    }
    let basic = ops.clone();
    for (na, a) in &basic {
        for (nb, b) in &basic {
            ops.push((format!("{na} {nb}"), a.matmul(b)));
        }
    }
    let mut double = Vec::new();
    let mut worst = Residual::zero_exact();
    for (name, m) in &ops {
        let op = decompose_homogeneous(m, &space)?;
        let r = check_double_deformation(&op, &theta)?;
        worst = worst.merge(r);
        double.push(json!({ "word": name, "residual": residual_json(&r) }));
    }
    let mut cocycle = Residual::zero_exact();
    for (_, a) in &basic {
        for (_, b) in &basic {
            let (oa, ob) = (decompose_homogeneous(a, &space)?, decompose_homogeneous(b, &space)?);
            let (p, q) = (oa.homogeneous_degree().expect("generator"), ob.homogeneous_degree().expect("generator"));
            let lhs = rieffel_twist(&oa, &theta)?.matrix().matmul(&rieffel_twist(&ob, &theta)?.matrix());
            let ab = decompose_homogeneous(&a.matmul(b), &space)?;
            let phase = Scalar::from_phase(homogeneous_phase(&theta, &p, &q)).expect("complex phases");
            cocycle = cocycle.merge(lhs.residual(&rieffel_twist(&ab, &theta)?.matrix().scale(&phase)));
        }
    }
    let pass = worst.max_abs < tol.max(f64::MIN_POSITIVE) && cocycle.max_abs < tol.max(f64::MIN_POSITIVE);
    let out = json!({
        "n": n,
        "operators": ops.len(),
        "doubleDeformation": double,
        "doubleDeformationMax": residual_json(&worst),
        "cocycleMax": residual_json(&cocycle),
        "tol": tol,
        "pass": pass,
    });
    Ok((out, if pass { 0 } else { 1 }))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Fiber { theta, x, grid } => run_fiber(&theta, x.as_deref(), grid.as_deref()),
        Command::Verify { theta, x, q, tol } => run_verify(&theta, &x, q, tol),
        Command::Classify2 { theta1_flag, theta2_flag, values } => run_classify2(theta1_flag, theta2_flag, values),
        Command::Classify { theta1, theta2 } => run_classify(&theta1, &theta2),
        Command::TraceRange { theta, halvings, distinguish, bound } => {
            run_trace_range(&theta, halvings, distinguish, bound)
        }
        Command::DeformCheck { theta, tol } => run_deform_check(&theta, tol),
        Command::Selftest { seed, iters } => {
            let summary = run_selftest(seed, iters);
            let code = if summary.pass { 0 } else { 1 };
            Ok((to_value(&summary), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match run(cli) {
        Ok(ok) => ok,
        Err(Failure { code, error }) => {
            eprintln!("cartheta: {error}");
            (json!({ "error": error.to_string(), "exitCode": code }), code)
        }
    };
    println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
    ExitCode::from(code)
}
