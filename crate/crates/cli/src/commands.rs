use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use seminorm_core::certify::{
    certify_induced_inf, certify_metric_inf, classify, verify_counterexample, CertificationReport,
    CertifyError, CounterexampleOptions,
};
use seminorm_core::lp::LpError;
use seminorm_core::matcore::io::{parse_number, read_matrix, ParseError};
use seminorm_core::matcore::{validate_stochastic, EqualRowSumMatrix};
use seminorm_core::products::{
    certify_rate, estimate_equivalence, run_product, MatrixEnsemble, ProductsError, Schedule,
};
use seminorm_core::seminorms::{induced_sampling_lower_bound, SeminormError};
use seminorm_core::{Matrix64, PNorm, Seminorm};

use crate::{Command, Kind, ScheduleKind};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_CONTRACTIVE: u8 = 3;
pub const EXIT_SOLVER: u8 = 4;
pub const EXIT_COUNTEREXAMPLE: u8 = 5;

/// Induced 1-seminorm has no exact evaluation; without `--trials` it is
/// bounded from below with this many samples.
const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<seminorm_core::MatrixError> for CliError {
    fn from(e: seminorm_core::MatrixError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SeminormError> for CliError {
    fn from(e: SeminormError) -> Self {
        match e {
            SeminormError::Matrix(_) | SeminormError::Unsupported(_) => CliError::Input(e.to_string()),
            SeminormError::Eigen(_) | SeminormError::Lp(_) => CliError::Solver(e.to_string()),
        }
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Matrix(m) => m.into(),
            CertifyError::Seminorm(s) => s.into(),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<ProductsError> for CliError {
    fn from(e: ProductsError) -> Self {
        match e {
            ProductsError::Seminorm(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Matrix64, CliError> {
    read_matrix(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn print_json<S: Serialize>(value: &S) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    println!("{text}");
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Seminorm {
            input,
            kind,
            p,
            trials,
            seed,
            tol,
        } => seminorm(&input, kind, p, trials, seed, tol),
        Command::Certify {
            input,
            seminorm,
            tol,
        } => certify(&input, seminorm, tol),
        Command::Classify { input, tol } => {
            let s = validate_stochastic(load(&input)?, tol)?;
            print_json(&json!({
                "input": input,
                "class": classify(&s),
                "tolerance": tol,
            }))?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            ensemble,
            schedule,
            seed,
            steps,
            seminorm,
            initial,
            out,
            summary,
            force,
        } => simulate(SimulateArgs {
            ensemble,
            schedule,
            seed,
            steps,
            seminorm,
            initial,
            out,
            summary,
            force,
        }),
        Command::Counterexample {
            perturb,
            tau_threshold,
            json,
        } => counterexample(perturb, tau_threshold, json),
        Command::Equivalence {
            a,
            b,
            n,
            samples,
            seed,
        } => {
            if n == 0 {
                return Err(CliError::Input("--n must be positive".into()));
            }
            let est = estimate_equivalence(a, b, n, samples, seed)?;
            print_json(&json!({
                "a": a,
                "b": b,
                "n": n,
                "samples": samples,
                "c_min": est.c_min,
                "c_max": est.c_max,
                "accepted": est.accepted,
                "rejected": est.rejected,
                "method": "sampling",
                "seed": seed,
            }))?;
            Ok(EXIT_OK)
        }
    }
}

fn seminorm(
    input: &Path,
    kind: Kind,
    p: PNorm,
    trials: Option<usize>,
    seed: u64,
    tol: f64,
) -> Result<u8, CliError> {
    let m = load(input)?;
    let mut used_seed = None;
    let value = match kind {
        Kind::Metric => Seminorm::Metric(p).evaluate(&m)?,
        Kind::Coe => Seminorm::Ergodicity.evaluate(&m)?,
        Kind::Induced => {
            let e = EqualRowSumMatrix::new(m, tol)?;
            match (trials, p) {
                (None, PNorm::Two | PNorm::Inf) => Seminorm::Induced(p).evaluate_checked(&e)?,
                (t, _) => {
                    used_seed = Some(seed);
                    induced_sampling_lower_bound(&e, p, t.unwrap_or(DEFAULT_TRIALS), seed)
                }
            }
        }
    };
    let mut out = serde_json::to_value(&value).expect("value serializes");
    let obj = out.as_object_mut().expect("object");
    obj.insert("input".into(), json!(input));
    obj.insert("seed".into(), json!(used_seed));
    if used_seed.is_some() {
        obj.insert("trials".into(), json!(trials.unwrap_or(DEFAULT_TRIALS)));
    }
    print_json(&out)?;
    Ok(EXIT_OK)
}

fn certify(input: &Path, seminorm: Seminorm, tol: f64) -> Result<u8, CliError> {
    let m = load(input)?;
    let (class, cert) = match seminorm {
        Seminorm::Metric(PNorm::Inf) => {
            let s = validate_stochastic(m, tol)?;
            (Some(classify(&s)), certify_metric_inf(&s)?)
        }
        _ => {
            let class = validate_stochastic(m.clone(), tol).ok().map(|s| classify(&s));
            let e = EqualRowSumMatrix::new(m, tol)?;
            (class, certify_induced_inf(&e)?)
        }
    };
    let method = match seminorm {
        Seminorm::Metric(_) => "lp",
        _ => "explicit_formula",
    };
    let contractive = cert.contractive;
    let mut report = CertificationReport::new(class);
    report.push(cert);
    let mut out = serde_json::to_value(&report).expect("report serializes");
    let obj = out.as_object_mut().expect("object");
    obj.insert("input".into(), json!(input));
    obj.insert("contractive".into(), json!(contractive));
    obj.insert("method".into(), json!(method));
    obj.insert("tolerance".into(), json!(tol));
    obj.insert("seed".into(), Value::Null);
    print_json(&out)?;
    Ok(if contractive { EXIT_OK } else { EXIT_NOT_CONTRACTIVE })
}

struct SimulateArgs {
    ensemble: Vec<PathBuf>,
    schedule: ScheduleKind,
    seed: u64,
    steps: usize,
    seminorm: Seminorm,
    initial: Option<String>,
    out: Option<PathBuf>,
    summary: Option<PathBuf>,
    force: bool,
}

fn ensemble_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| matches!(f.extension().and_then(|x| x.to_str()), Some("csv" | "json")))
                .collect();
            found.sort();
            if found.is_empty() {
                return Err(CliError::Input(format!("{}: no .csv or .json matrices", p.display())));
            }
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn simulate(args: SimulateArgs) -> Result<u8, CliError> {
    let files = ensemble_files(&args.ensemble)?;
    let matrices = files.iter().map(|f| load(f)).collect::<Result<Vec<_>, _>>()?;
    let ensemble = MatrixEnsemble::new(matrices, args.seminorm)?;
    let n = ensemble.dim();
    let d = match &args.initial {
        Some(text) => {
            let v = text
                .split(',')
                .map(|t| parse_number(t).ok_or_else(|| CliError::Input(format!("--initial: cannot parse {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if v.len() != n {
                return Err(CliError::Input(format!(
                    "--initial has {} entries, ensemble matrices are {n}x{n}",
                    v.len()
                )));
            }
            v
        }
        None => {
            let mut e1 = vec![0.0; n];
            e1[0] = 1.0;
            e1
        }
    };
    let schedule = match args.schedule {
        ScheduleKind::Cyclic => Schedule::Cyclic,
        ScheduleKind::Random => Schedule::Random { seed: args.seed },
    };
    let lambda = ensemble.lambda();
    let refused = lambda >= 1.0;
    let mut summary = json!({
        "ensemble": files,
        "seminorm": args.seminorm,
        "lambda": lambda,
        "member_values": ensemble.values(),
        "schedule": schedule,
        "steps": args.steps,
        "method": "simulation",
        "seed": matches!(schedule, Schedule::Random { .. }).then_some(args.seed),
        "refused": refused,
        "rate": Value::Null,
        "trace": args.out,
    });

    if !refused || args.force {
        let trace = run_product(&ensemble, &schedule, args.steps, &d)?;
        if let Some(path) = &args.out {
            let mut buf = Vec::new();
            trace
                .write_csv(&mut buf)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            write_file(path, &buf)?;
        }
        let last = trace.steps.last().expect("at least one step");
        summary["final_state_seminorm"] = json!(last.state_seminorm);
        summary["final_product_seminorm"] = json!(last.product_seminorm);
        summary["final_shift"] = json!(last.shift);
        if !refused {
            let rate = certify_rate(&trace, lambda)?;
            summary["tolerance"] = json!(rate.tolerance);
            summary["passed"] = json!(rate.passed);
            summary["rate"] = serde_json::to_value(&rate).expect("rate serializes");
        }
    }
    let code = if refused {
        eprintln!("lambda = {lambda} is not below 1; rate certification refused");
        EXIT_NOT_CONTRACTIVE
    } else if summary["passed"] == json!(true) {
        EXIT_OK
    } else {
        EXIT_NOT_CONTRACTIVE
    };
    if let Some(path) = &args.summary {
        let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        write_file(path, text.as_bytes())?;
    }
    print_json(&summary)?;
    Ok(code)
}

fn counterexample(perturb: Option<f64>, tau_threshold: f64, as_json: bool) -> Result<u8, CliError> {
    if let Some(eps) = perturb {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(CliError::Input(format!("--perturb must be positive, got {eps}")));
        }
    }
    let report = verify_counterexample(CounterexampleOptions {
        perturb,
        tau_threshold,
    });
    if as_json {
        print_json(&report)?;
    } else {
        for s in &report.steps {
            let mark = if s.passed { "ok  " } else { "FAIL" };
            println!("[{mark}] {}. {}: {}", s.step, s.name, s.detail);
        }
        match report.failed_step {
            None => println!("all {} checks passed", report.steps.len()),
            Some(k) => println!("stopped at step {k}"),
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use seminorm_core::lp::LpStatus;
    use seminorm_core::MatrixError;

    #[test]
    fn error_codes() {
        let lp: CliError = SeminormError::Lp(LpError::Status(LpStatus::Unbounded)).into();
        assert_eq!(lp.code(), EXIT_SOLVER);
        let bad: CliError = SeminormError::Matrix(MatrixError::Empty { rows: 0, cols: 0 }).into();
        assert_eq!(bad.code(), EXIT_INPUT);
        let unsupported: CliError = SeminormError::Unsupported(Seminorm::Induced(PNorm::One)).into();
        assert_eq!(unsupported.code(), EXIT_INPUT);
        let inconsistent: CliError = CertifyError::Inconsistent { feasible: true, value: 1.0 }.into();
        assert_eq!(inconsistent.code(), EXIT_SOLVER);
        let refused: CliError = ProductsError::Refused { lambda: 1.0 }.into();
        assert_eq!(refused.code(), EXIT_INPUT);
    }
}
