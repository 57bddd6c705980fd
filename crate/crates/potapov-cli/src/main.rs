//! Command-line front end for the `potapov` library.
//!
//! Machine output goes to stdout, diagnostics to stderr. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0  | success (for `check`: strict sequence) |
//! | 1  | other library error, or a failed `verify` run |
//! | 2  | malformed input or usage error |
//! | 10 | `check`: degenerate sequence |
//! | 20 | invalid sequence or parameter |
//! | 30 | point outside the common holomorphy set |
//! | 40 | operation needs a strict sequence |

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use potapov::io as pio;
use potapov::matkernel::{eigenvalues_hermitian, spectral_norm};
use potapov::sequence::Classification;
use potapov::solve::{central_function, lft_solution, uniqueness};
use potapov::weyl::{extremal_tower, limit_study, weyl_ball, LimitTable, WeylBall};
use potapov::{CMatrix, Error, PotapovSeq, Tolerances};

/// Environment variable that overrides the residual tolerance.
const TOL_ENV: &str = "POTAPOV_TOL";

#[derive(Parser)]
#[command(
    name = "potapov",
    version,
    about = "Carathéodory interpolation for J-Potapov functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Residual tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output format; `limit` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tower {
    Central,
    Extremal,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Problem JSON file; stdin when omitted or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a sequence and print its ball parameters.
    Check {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Emit the solution for a parameter with its Taylor check.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Parameter JSON file; the central solution when omitted.
        #[arg(long)]
        param: Option<PathBuf>,
    },
    /// Weyl balls at the given points.
    Weyl {
        #[command(flatten)]
        input: InputArgs,
        /// Evaluation point `RE,IM`; repeatable.
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Ball parameters at one point along a tower of extensions.
    Limit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
        /// Final order of the tower.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = Tower::Central)]
        tower: Tower,
    },
    /// Potapov-Ginzburg transform of the sequence.
    Pg {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run the self-verification suite.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => 2,
            Error::NotPotapov
            | Error::InvalidSignature(_)
            | Error::InvalidParam(_)
            | Error::NotContractive(_)
            | Error::DimensionMismatch(_) => 20,
            Error::OutsideCommonDomain => 30,
            Error::NotStrict => 40,
            _ => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn parse_fail(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn read_json(path: Option<&PathBuf>) -> Result<Value, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| Failure {
            code: 1,
            msg: format!("cannot read {}: {e}", p.display()),
        })?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure {
                code: 1,
                msg: format!("cannot read stdin: {e}"),
            })?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| parse_fail(format!("malformed JSON: {e}")))
}

/// Tolerances from defaults, the problem file, the environment and `--tol`, in
/// increasing priority.
fn tolerances(problem: &Value, flag: Option<f64>) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(t) = problem.get("tolerances") {
        let field = |name: &str, cur: f64| -> Result<f64, Failure> {
            match t.get(name) {
                None => Ok(cur),
                Some(v) => v
                    .as_f64()
                    .ok_or_else(|| parse_fail(format!("tolerances.{name} must be a number"))),
            }
        };
        tol = Tolerances::new(
            field("rank_rel", tol.rank_rel)?,
            field("psd_eig", tol.psd_eig)?,
            field("residual", tol.residual)?,
        )?;
    }
    if let Ok(s) = std::env::var(TOL_ENV) {
        let v = s
            .parse()
            .map_err(|_| parse_fail(format!("{TOL_ENV} must be a number")))?;
        tol = Tolerances::new(tol.rank_rel, tol.psd_eig, v)?;
    }
    if let Some(v) = flag {
        tol = Tolerances::new(tol.rank_rel, tol.psd_eig, v)?;
    }
    Ok(tol)
}

fn load(input: &InputArgs, tol_flag: Option<f64>) -> Result<(Value, PotapovSeq), Failure> {
    let problem = read_json(input.input.as_ref())?;
    let tol = tolerances(&problem, tol_flag)?;
    let seq = pio::seq_from_json(&problem, tol)?;
    Ok((problem, seq))
}

fn require_potapov(seq: &PotapovSeq) -> Result<(), Failure> {
    if seq.classification() == Classification::Invalid {
        return Err(Error::NotPotapov.into());
    }
    Ok(())
}

fn points(flags: &[String], problem: &Value) -> Result<Vec<Complex64>, Failure> {
    let mut pts = flags
        .iter()
        .map(|s| pio::parse_point(s))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(g) = problem.get("grid") {
        pts.extend(pio::grid_from_json(g)?);
    }
    if pts.iter().any(|z| z.norm().is_nan() || z.norm() >= 1.0) {
        return Err(Error::InvalidParam("points must lie in the open unit disk".into()).into());
    }
    if pts.is_empty() {
        return Err(parse_fail(
            "no evaluation point: pass --point RE,IM or a grid",
        ));
    }
    Ok(pts)
}

fn emit(out: &mut impl Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{v}").map_err(|e| Failure {
        code: 1,
        msg: e.to_string(),
    })
}

fn cmd_check(input: &InputArgs, tol: Option<f64>) -> CmdResult {
    let (_, seq) = load(input, tol)?;
    let class = seq.classification();
    let mut report = json!({
        "classification": class.name(),
        "m": seq.m(),
        "order": seq.order(),
    });
    if class != Classification::Invalid {
        let mut orders = Vec::new();
        for k in 0..=seq.order() {
            let b = seq.ball_parameters_at(k + 1)?;
            orders.push(json!({
                "order": k,
                "M": pio::matrix_to_json(&b.center),
                "L": pio::matrix_to_json(&b.left),
                "R": pio::matrix_to_json(&b.right),
            }));
        }
        report["balls"] = Value::Array(orders);
        report["unique"] = json!(uniqueness(&seq)?.unique);
    }
    emit(&mut io::stdout(), &report)?;
    eprintln!("{} sequence of order {}", class.name(), seq.order());
    Ok(match class {
        Classification::Strict => 0,
        Classification::Degenerate => 10,
        Classification::Invalid => 20,
    })
}

fn cmd_solve(input: &InputArgs, param: Option<&PathBuf>, tol: Option<f64>) -> CmdResult {
    let (problem, seq) = load(input, tol)?;
    require_potapov(&seq)?;
    let s = match (param, problem.get("param")) {
        (Some(p), _) => Some(pio::param_from_json(&read_json(Some(p))?)?),
        (None, Some(v)) => Some(pio::param_from_json(v)?),
        (None, None) => None,
    };
    let f = match &s {
        Some(s) => {
            s.validate(seq.m(), seq.tolerances())?;
            lft_solution(&seq, s)?
        }
        None => central_function(&seq)?.0,
    };
    let n = seq.order();
    let taylor = f.taylor_coeffs(n + 3)?;
    let residual = taylor
        .iter()
        .zip(seq.coeffs())
        .map(|(t, a)| potapov::matkernel::max_abs(&(t - a)))
        .fold(0.0, f64::max);
    let report = json!({
        "classification": seq.classification().name(),
        "parameter": s.as_ref().map_or(Value::String("central".into()), pio::param_to_json),
        "function": pio::rational_to_json(&f),
        "taylor": taylor.iter().map(pio::matrix_to_json).collect::<Vec<_>>(),
        "residual": residual,
    });
    emit(&mut io::stdout(), &report)?;
    eprintln!("interpolation residual {residual:e}");
    Ok(0)
}

fn flat_header(prefix: &str, m: usize) -> Vec<String> {
    let mut h = Vec::new();
    for i in 0..m {
        for j in 0..m {
            h.push(format!("{prefix}_{i}_{j}_re"));
            h.push(format!("{prefix}_{i}_{j}_im"));
        }
    }
    h
}

fn flat(a: &CMatrix) -> Vec<String> {
    let mut v = Vec::new();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            v.push(fmt(a[(i, j)].re));
            v.push(fmt(a[(i, j)].im));
        }
    }
    v
}

/// Shortest round-trip decimal; independent of locale.
fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn csv_fail(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        msg: format!("csv output: {e}"),
    }
}

fn write_balls_csv(balls: &[WeylBall], m: usize) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(io::stdout());
    let mut header = vec!["w_re".to_string(), "w_im".into(), "order".into()];
    for p in ["M", "Lnorm", "Rhalf"] {
        header.extend(flat_header(p, m));
    }
    w.write_record(&header).map_err(csv_fail)?;
    for b in balls {
        let mut row = vec![fmt(b.w.re), fmt(b.w.im), b.order.to_string()];
        row.extend(flat(&b.center));
        row.extend(flat(&b.lnorm));
        row.extend(flat(&b.rhalf));
        w.write_record(&row).map_err(csv_fail)?;
    }
    w.flush().map_err(csv_fail)
}

fn cmd_weyl(input: &InputArgs, pts: &[String], tol: Option<f64>, format: Format) -> CmdResult {
    let (problem, seq) = load(input, tol)?;
    require_potapov(&seq)?;
    let pts = points(pts, &problem)?;
    let balls = pts
        .iter()
        .map(|&w| weyl_ball(&seq, w))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Json => emit(
            &mut io::stdout(),
            &Value::Array(balls.iter().map(pio::ball_to_json).collect()),
        )?,
        Format::Csv => write_balls_csv(&balls, seq.m())?,
    }
    Ok(0)
}

fn write_limit_csv(t: &LimitTable, m: usize) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(io::stdout());
    let mut header = vec!["order".to_string(), "norm_M".into()];
    header.extend((0..m).map(|i| format!("eig_L_{i}")));
    header.extend((0..m).map(|i| format!("eig_R_{i}")));
    header.push("rank_L".into());
    header.push("rank_R".into());
    w.write_record(&header).map_err(csv_fail)?;
    for r in &t.rows {
        let mut row = vec![r.order.to_string(), fmt(spectral_norm(&r.center))];
        row.extend(r.eig_l.iter().map(|&x| fmt(x)));
        row.extend(r.eig_r.iter().map(|&x| fmt(x)));
        row.push(r.rank_l.to_string());
        row.push(r.rank_r.to_string());
        w.write_record(&row).map_err(csv_fail)?;
    }
    w.flush().map_err(csv_fail)
}

fn limit_json(t: &LimitTable) -> Value {
    json!({
        "w": pio::complex_to_json(t.w),
        "stagnation_order": t.stagnation_order,
        "rows": t.rows.iter().map(|r| json!({
            "order": r.order,
            "M": pio::matrix_to_json(&r.center),
            "L": pio::matrix_to_json(&r.l),
            "R": pio::matrix_to_json(&r.r),
            "eig_L": r.eig_l,
            "eig_R": r.eig_r,
            "rank_L": r.rank_l,
            "rank_R": r.rank_r,
        })).collect::<Vec<_>>(),
        "pg_limits": t.pg_limits.as_ref().map(|(l, r)| json!({
            "L": pio::matrix_to_json(l),
            "R": pio::matrix_to_json(r),
        })),
    })
}

fn cmd_limit(
    input: &InputArgs,
    pts: &[String],
    order: Option<usize>,
    tower: Tower,
    tol: Option<f64>,
    format: Format,
) -> CmdResult {
    let (problem, seq) = load(input, tol)?;
    require_potapov(&seq)?;
    let w = points(pts, &problem)?[0];
    let target = order.unwrap_or(seq.order());
    let seq = if target <= seq.order() {
        seq.prefix(target)
    } else {
        match tower {
            Tower::Central => seq.extend_central(target - seq.order())?,
            Tower::Extremal => extremal_tower(&seq, w, target)?,
        }
    };
    let table = limit_study(&seq, w)?;
    match format {
        Format::Csv => write_limit_csv(&table, seq.m())?,
        Format::Json => emit(&mut io::stdout(), &limit_json(&table))?,
    }
    match table.stagnation_order {
        Some(k) => eprintln!("left semi-radius stagnates from order {k}"),
        None => eprintln!("no stagnation detected"),
    }
    let last = table.last();
    eprintln!("terminal ranks: L {} R {}", last.rank_l, last.rank_r);
    eprintln!(
        "smallest eigenvalue of terminal L: {:e}",
        eigenvalues_hermitian(&last.l)[0]
    );
    Ok(0)
}

fn cmd_pg(input: &InputArgs, tol: Option<f64>) -> CmdResult {
    let (_, seq) = load(input, tol)?;
    require_potapov(&seq)?;
    let b = seq.pg_transform()?;
    emit(&mut io::stdout(), &pio::seq_to_json(&b))?;
    Ok(0)
}

fn cmd_verify(seed: u64, count: usize, format: Format) -> CmdResult {
    let report = potapov::suite::run_suite(seed, count);
    match format {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "passed": c.passed(),
                        "instances": c.instances,
                        "failures": c.failures,
                        "worst": c.worst,
                        "limit": c.limit,
                        "first_failure": c.first_failure,
                    })
                })
                .collect();
            emit(
                &mut io::stdout(),
                &json!({ "seed": seed, "count": count, "passed": report.passed(), "checks": checks }),
            )?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["name", "passed", "instances", "failures", "worst", "limit"])
                .map_err(csv_fail)?;
            for c in &report.checks {
                w.write_record([
                    c.name.to_string(),
                    c.passed().to_string(),
                    c.instances.to_string(),
                    c.failures.to_string(),
                    fmt(c.worst),
                    fmt(c.limit),
                ])
                .map_err(csv_fail)?;
            }
            w.flush().map_err(csv_fail)?;
        }
    }
    for c in &report.checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        eprintln!(
            "{tag} {:32} worst {:.2e} (limit {:.0e})",
            c.name, c.worst, c.limit
        );
        if let Some(f) = &c.first_failure {
            eprintln!("     first failure: {f}");
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = cli.tol;
    let format = cli.format.unwrap_or(Format::Json);
    let result = match &cli.command {
        Command::Check { input } => cmd_check(input, tol),
        Command::Solve { input, param } => cmd_solve(input, param.as_ref(), tol),
        Command::Weyl { input, points } => cmd_weyl(input, points, tol, format),
        Command::Limit {
            input,
            points,
            order,
            tower,
        } => cmd_limit(
            input,
            points,
            *order,
            *tower,
            tol,
            cli.format.unwrap_or(Format::Csv),
        ),
        Command::Pg { input } => cmd_pg(input, tol),
        Command::Verify { seed, count } => cmd_verify(*seed, *count, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
