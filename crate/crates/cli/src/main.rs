use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use shehu::expr::{format, parse_with, ParseOptions};
use shehu::inverse::invert_with_trace;
use shehu::oracle::{PairSpec, QuadratureSpec, TalbotSpec, DEFAULT_GRID, PAIR_TOL};
use shehu::table::errata_for;
use shehu::{
    evaluate, normalize_image, parse, residual, solve_ivp, solve_pde, transform_expr, verify_table_with, Bindings,
    Coeff, Error, Expr, IVProblem, ImageForm, ModalPDEProblem, PdeKind, Problem, SineSeries, Solution, Target,
};

/// Exit code reserved for "verify-table found errata".
const EXIT_ERRATA: u8 = 2;

#[derive(Parser)]
#[command(name = "shehu", version, about = "Shehu transform engine: transforms, inverses, solvers and table audit")]
struct Cli {
    /// Emit the CommandResult envelope as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forward transform of a time-domain expression in t.
    Transform {
        expr: String,
        /// Convention to print the image in.
        #[arg(long = "as", value_enum, default_value_t = TargetArg::Shehu)]
        target: TargetArg,
        /// Print the homogenized form in r = s/u instead of the expanded one.
        #[arg(long)]
        homogenized: bool,
    },
    /// Inverse transform of a rational image in s, u.
    Invert { image: String },
    /// Rewrites an image from one convention into another.
    Convert {
        image: String,
        #[arg(long, value_enum)]
        from: TargetArg,
        #[arg(long, value_enum)]
        to: TargetArg,
    },
    /// Solves a constant-coefficient linear initial value problem.
    SolveOde {
        #[command(flatten)]
        ode: OdeArgs,
        /// Residual above which the solution is reported as an error.
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
    },
    /// Solves the heat or wave equation on [0, L] with zero boundary values.
    SolvePde {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        pde: PdeArgs,
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
    },
    /// Audits the transform table against the engine and the numeric oracle.
    VerifyTable {
        /// Fixture path; defaults to $SHEHU_TABLE_PATH, then the bundled table.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// `default` or `s,u;s,u;...`.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Where to write the full report.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Samples a solution on an (x, t) grid as CSV.
    Sample {
        /// Expression in x and t to sample.
        #[arg(long, conflicts_with_all = ["kind", "eq"])]
        expr: Option<String>,
        /// Sample the solution of this PDE instead.
        #[arg(long, value_enum, conflicts_with = "eq")]
        kind: Option<KindArg>,
        #[command(flatten)]
        pde: PdeArgs,
        /// Sample the solution of this ODE instead.
        #[arg(long, requires = "init")]
        eq: Option<String>,
        #[arg(long)]
        init: Option<String>,
        /// Points in x and t: `nx,nt`.
        #[arg(long, default_value = "21,21")]
        grid: String,
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        x_range: String,
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        t_range: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OdeArgs {
    /// e.g. "v'' - 3*v' + 2*v = exp(3*t)".
    #[arg(long)]
    eq: String,
    /// e.g. "v(0)=1, v'(0)=0".
    #[arg(long)]
    init: String,
}

#[derive(Args)]
struct PdeArgs {
    /// Diffusivity (heat).
    #[arg(long, default_value = "1")]
    kappa: String,
    /// Wave speed (wave).
    #[arg(long, default_value = "1")]
    c: String,
    #[arg(long, default_value = "1")]
    length: String,
    /// Initial profile, a finite sine series in x.
    #[arg(long, default_value = "0")]
    initial: String,
    /// Initial velocity (wave).
    #[arg(long, default_value = "0")]
    velocity: String,
    /// Time-independent forcing, a finite sine series in x.
    #[arg(long, default_value = "0")]
    forcing: String,
}

#[derive(Args)]
struct TolArgs {
    /// Relative tolerance of the oracle comparisons.
    #[arg(long, default_value_t = PAIR_TOL)]
    tol: f64,
    /// Relative tolerance of the forward quadrature.
    #[arg(long, default_value_t = QuadratureSpec::default().rel_tol)]
    quad_tol: f64,
    /// Talbot node count (even, >= 16).
    #[arg(long, default_value_t = TalbotSpec::default().nodes)]
    talbot_nodes: usize,
    /// Allowed gap between the M and M/2 Talbot estimates.
    #[arg(long, default_value_t = TalbotSpec::default().agreement)]
    talbot_agreement: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Shehu,
    Laplace,
    Sumudu,
    Natural,
    Yang,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Target {
        match t {
            TargetArg::Shehu => Target::Shehu,
            TargetArg::Laplace => Target::Laplace,
            TargetArg::Sumudu => Target::Sumudu,
            TargetArg::Natural => Target::Natural,
            TargetArg::Yang => Target::Yang,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Heat,
    Wave,
}

#[derive(Serialize)]
struct CommandResult {
    command: &'static str,
    status: &'static str,
    payload: Value,
    diagnostics: Vec<String>,
}

/// What a subcommand produced: its payload, the human-readable text, and
/// whether the run counts as a failure.
struct Outcome {
    payload: Value,
    text: String,
    diagnostics: Vec<String>,
    exit: u8,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Outcome {
        Outcome {
            payload,
            text,
            diagnostics: Vec::new(),
            exit: 0,
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

struct Failure {
    msg: String,
    payload: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            payload: json!({"error": e.kind(), "message": e.to_string()}),
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    let msg = msg.into();
    Failure {
        payload: json!({"error": "UsageError", "message": msg}),
        msg,
    }
}

fn constant(text: &str, what: &str) -> Result<Coeff, Failure> {
    let e = parse_with(text, &ParseOptions::time())?;
    e.const_value().ok_or_else(|| usage(format!("--{what} must be a constant, got '{text}'")))
}

fn cmd_transform(expr: &str, target: Target, homogenized: bool) -> CmdResult {
    let v = parse(expr)?;
    let img = transform_expr(&v)?;
    let image = if target == Target::Shehu && homogenized {
        img.homogenized()
    } else {
        format(&img.convert(target)?)
    };
    let errata: Vec<Value> = errata_for(&v).iter().map(|e| e.to_json()).collect();
    let mut out = Outcome::ok(
        json!({
            "target": target.name(),
            "image": image,
            "homogenized": img.homogenized(),
            "roc": img.roc.to_string(),
            "errata": errata,
        }),
        format!("{image}, {}", img.roc_text()),
    );
    for e in &errata {
        out.diagnostics.push(format!(
            "printed table form differs: {} {} prints {}",
            e["location"].as_str().unwrap_or_default(),
            e["column"].as_str().unwrap_or_default(),
            e["printed"].as_str().unwrap_or_default()
        ));
    }
    Ok(out)
}

fn cmd_invert(image: &str) -> CmdResult {
    // Accept `transform` output verbatim, ROC clause included.
    let image = image.split_once(", valid for").map_or(image, |(img, _)| img);
    let e = parse_with(image, &ParseOptions::image())?;
    let f = normalize_image(&e)?;
    let (v, terms) = invert_with_trace(&f)?;
    let time = format(&v);
    Ok(Outcome::ok(
        json!({
            "time": time,
            "derivation": terms.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        }),
        time,
    ))
}

fn cmd_convert(image: &str, from: Target, to: Target) -> CmdResult {
    let e = parse_with(image, &ParseOptions::image())?;
    let form = ImageForm::from_expr(&e, from)?;
    let out = format(&form.convert(to)?.to_expr(to));
    Ok(Outcome::ok(json!({"from": from.name(), "to": to.name(), "image": out}), out))
}

fn solved(problem: Problem, sol: Solution, tol: f64) -> Outcome {
    let r = residual(&problem, &sol.expr);
    let payload = sol.to_json(r);
    let mut out = Outcome::ok(payload, format(&sol.expr));
    if !(r <= tol) {
        out.diagnostics.push(format!("residual {r:e} exceeds --residual-tol {tol:e}"));
        out.exit = 1;
    }
    out
}

fn ode_problem(eq: &str, init: &str) -> Result<IVProblem, Failure> {
    Ok(IVProblem::parse(eq, init)?)
}

fn pde_problem(kind: KindArg, a: &PdeArgs) -> Result<ModalPDEProblem, Failure> {
    let length = constant(&a.length, "length")?;
    let kind = match kind {
        KindArg::Heat => PdeKind::Heat {
            kappa: constant(&a.kappa, "kappa")?,
        },
        KindArg::Wave => PdeKind::Wave { c: constant(&a.c, "c")? },
    };
    let series = |text: &str| SineSeries::parse(text, &length);
    Ok(ModalPDEProblem {
        kind,
        initial: series(&a.initial)?,
        velocity: series(&a.velocity)?,
        forcing: series(&a.forcing)?,
        length,
    })
}

fn parse_grid(text: &str) -> Result<Vec<(f64, f64)>, Failure> {
    if text == "default" {
        return Ok(DEFAULT_GRID.to_vec());
    }
    text.split(';')
        .map(|pt| {
            let xs: Vec<f64> = pt.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| usage(format!("bad grid point '{pt}'")))?;
            match xs[..] {
                [s, u] if u > 0.0 => Ok((s, u)),
                _ => Err(usage(format!("grid point '{pt}' must be 's,u' with u > 0"))),
            }
        })
        .collect()
}

fn cmd_verify_table(fixture: Option<PathBuf>, grid: &str, out: Option<PathBuf>, tol: &TolArgs) -> CmdResult {
    let grid = parse_grid(grid)?;
    let spec = PairSpec {
        tol: tol.tol,
        quadrature: QuadratureSpec {
            rel_tol: tol.quad_tol,
            ..QuadratureSpec::default()
        },
        talbot: TalbotSpec {
            nodes: tol.talbot_nodes,
            agreement: tol.talbot_agreement,
            ..TalbotSpec::default()
        },
    };
    let entries = shehu::load_table(fixture.as_deref())?;
    let (report, errata) = verify_table_with(&entries, &grid, &spec);
    let full = report.to_json(&errata);
    if let Some(path) = &out {
        let text = serde_json::to_string_pretty(&full).expect("report serializes");
        std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    let mut text = String::new();
    for r in &report.rows {
        text.push_str(&format!("row {:>2}  {:<16} {}\n", r.row_id, r.status.as_str(), r.details));
    }
    for e in &errata {
        text.push_str(&format!(
            "erratum {}: printed {} | derived {} | {}{}\n",
            e.key(),
            e.printed,
            e.derived,
            e.adjudication,
            if e.confirmed { "" } else { " [NOT CONFIRMED]" }
        ));
    }
    text.push_str(&format!(
        "{} rows, {} verified numerically, {} errata ({} confirmed)",
        report.rows.len(),
        report.numeric_passes(),
        errata.len(),
        errata.iter().filter(|e| e.confirmed).count()
    ));
    let payload = json!({
        "rows": report.rows.len(),
        "numeric_passes": report.numeric_passes(),
        "statuses": report.rows.iter().map(|r| json!({"row": r.row_id, "status": r.status.as_str()})).collect::<Vec<_>>(),
        "errata": errata.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        "out": out.map(|p| p.display().to_string()),
    });
    let mut o = Outcome::ok(payload, text);
    if !errata.is_empty() {
        o.exit = EXIT_ERRATA;
        o.diagnostics.push(format!("{} errata detected", errata.len()));
    }
    Ok(o)
}

fn pair(text: &str, what: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || usage(format!("--{what} expects 'a,b', got '{text}'"));
    match parts[..] {
        [a, b] => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn linspace(n: usize, (a, b): (f64, f64)) -> Vec<f64> {
    match n {
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

struct SampleSpec<'a> {
    grid: &'a str,
    x_range: &'a str,
    t_range: &'a str,
    out: Option<PathBuf>,
}

fn cmd_sample(expr: Expr, spec: SampleSpec<'_>) -> CmdResult {
    let (nx, nt) = pair(spec.grid, "grid")?;
    if nx < 1.0 || nt < 1.0 || nx.fract() != 0.0 || nt.fract() != 0.0 {
        return Err(usage("--grid expects positive integer counts 'nx,nt'"));
    }
    let xs = linspace(nx as usize, pair(spec.x_range, "x-range")?);
    let ts = linspace(nt as usize, pair(spec.t_range, "t-range")?);
    let mut csv = String::from("x,t,v\n");
    let mut rows = Vec::new();
    for &t in &ts {
        for &x in &xs {
            let v = evaluate(&expr, &Bindings::xt(x, t))?;
            csv.push_str(&format!("{x},{t},{v}\n"));
            rows.push([x, t, v]);
        }
    }
    let payload = json!({"expr": format(&expr), "columns": ["x", "t", "v"], "rows": rows});
    if let Some(path) = &spec.out {
        std::fs::write(path, &csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        return Ok(Outcome::ok(payload, format!("wrote {} points to {}", rows.len(), path.display())));
    }
    Ok(Outcome::ok(payload, csv.trim_end().to_string()))
}

fn run(cmd: Cmd) -> (&'static str, CmdResult) {
    match cmd {
        Cmd::Transform {
            expr,
            target,
            homogenized,
        } => ("transform", cmd_transform(&expr, target.into(), homogenized)),
        Cmd::Invert { image } => ("invert", cmd_invert(&image)),
        Cmd::Convert { image, from, to } => ("convert", cmd_convert(&image, from.into(), to.into())),
        Cmd::SolveOde { ode, residual_tol } => ("solve-ode", {
            ode_problem(&ode.eq, &ode.init)
                .and_then(|p| Ok(solved(Problem::Ivp(p.clone()), solve_ivp(&p)?, residual_tol)))
        }),
        Cmd::SolvePde {
            kind,
            pde,
            residual_tol,
        } => ("solve-pde", {
            pde_problem(kind, &pde).and_then(|p| Ok(solved(Problem::Pde(p.clone()), solve_pde(&p)?, residual_tol)))
        }),
        Cmd::VerifyTable { fixture, grid, out, tol } => ("verify-table", cmd_verify_table(fixture, &grid, out, &tol)),
        Cmd::Sample {
            expr,
            kind,
            pde,
            eq,
            init,
            grid,
            x_range,
            t_range,
            out,
        } => ("sample", {
            let target: Result<Expr, Failure> = match (expr, kind, eq) {
                (Some(e), _, _) => parse(&e).map_err(Failure::from),
                (None, Some(k), _) => pde_problem(k, &pde).and_then(|p| Ok(solve_pde(&p)?.expr)),
                (None, None, Some(eq)) => {
                    ode_problem(&eq, init.as_deref().unwrap_or_default()).and_then(|p| Ok(solve_ivp(&p)?.expr))
                }
                (None, None, None) => Err(usage("sample needs --expr, --kind or --eq")),
            };
            target.and_then(|e| {
                cmd_sample(
                    e,
                    SampleSpec {
                        grid: &grid,
                        x_range: &x_range,
                        t_range: &t_range,
                        out,
                    },
                )
            })
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, result) = run(cli.cmd);
    let (envelope, text, exit) = match result {
        Ok(o) => {
            for d in &o.diagnostics {
                eprintln!("{command}: {d}");
            }
            let env = CommandResult {
                command,
                status: if o.exit == 0 { "ok" } else { "error" },
                payload: o.payload,
                diagnostics: o.diagnostics,
            };
            (env, Some(o.text), o.exit)
        }
        Err(f) => {
            eprintln!("{command}: error: {}", f.msg);
            let env = CommandResult {
                command,
                status: "error",
                payload: f.payload,
                diagnostics: vec![f.msg],
            };
            (env, None, 1)
        }
    };
    let mut stdout = std::io::stdout().lock();
    let written = if cli.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&envelope).expect("envelope serializes"))
    } else {
        match text {
            Some(t) => writeln!(stdout, "{t}"),
            None => Ok(()),
        }
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(exit)
}
