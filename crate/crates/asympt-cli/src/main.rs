//! `asympt`: approximate analytical solutions of nonlinear oscillators and
//! singularly perturbed boundary-value problems, cross-checked against
//! adaptive numerical integration.

use asympt_cli::cfg::{parse_config, OutputFormat, RunConfig, SweepAxis};
use asympt_cli::report::{sweep_csv, to_json_pretty};
use asympt_cli::{exec, exit_code, EXIT_ORACLE_DISAGREEMENT, EXIT_VERIFY_FAILED};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

/// Environment variable naming a default config file.
const CONFIG_ENV: &str = "ASYMPT_CONFIG";

#[derive(Parser)]
#[command(
    name = "asympt",
    version,
    about = "Asymptotic approximations with numerical cross-checks",
    after_help = "Config file: flat `key = value` text with [problem], [method], and [sweep] \
sections; the ASYMPT_CONFIG environment variable names a default file and \
command-line flags override its values."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one problem/method pair and report the oracle comparison.
    Solve(RunArgs),
    /// Run a method over a 1- or 2-axis parameter grid.
    Sweep(SweepArgs),
    /// Run the full acceptance suite (one line per criterion).
    Verify,
    /// Enumerate problems and methods.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Problem name from `asympt list`.
    #[arg(long)]
    problem: Option<String>,
    /// Method name; each problem has a default.
    #[arg(long)]
    method: Option<String>,
    /// Expansion order where the method takes one.
    #[arg(long)]
    order: Option<u32>,
    /// Shorthand for --param eps=VALUE.
    #[arg(long)]
    eps: Option<f64>,
    /// Shorthand for --param amp=VALUE.
    #[arg(long)]
    amp: Option<f64>,
    /// Shorthand for --param lambda=VALUE.
    #[arg(long)]
    lambda: Option<f64>,
    /// Additional problem parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Report format: json (default) or csv.
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Oracle integrator relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Fail (exit 4) if the oracle relative error exceeds this.
    #[arg(long)]
    max_error: Option<f64>,
    /// Concurrent sweep cells (sweep only).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Sweep axis `param=lo:hi:steps`; repeatable up to twice.
    #[arg(long = "axis", value_name = "PARAM=LO:HI:STEPS")]
    axes: Vec<String>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    match Cli::parse().cmd {
        Cmd::Solve(args) => match build_config(args, Vec::new()) {
            Ok(cfg) => run_solve(&cfg),
            Err(e) => fail(&e),
        },
        Cmd::Sweep(args) => match build_config(args.run, args.axes) {
            Ok(cfg) => run_sweep(&cfg),
            Err(e) => fail(&e),
        },
        Cmd::Verify => {
            let out = exec::verify();
            for line in &out.lines {
                println!("{line}");
            }
            if out.all_passed {
                0
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Cmd::List => {
            print!("{}", exec::list_text());
            0
        }
    }
}

fn fail(err: &asympt::Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

/// Config file (if `ASYMPT_CONFIG` is set) first, then flags on top.
fn build_config(args: RunArgs, axes: Vec<String>) -> asympt::Result<RunConfig> {
    let mut cfg = match std::env::var_os(CONFIG_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| asympt::Error::Config {
                line: 0,
                reason: format!("cannot read {}: {e}", PathBuf::from(&path).display()),
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(p) = args.problem {
        cfg.problem = p;
    }
    if let Some(m) = args.method {
        cfg.method = Some(m);
    }
    if let Some(o) = args.order {
        cfg.order = Some(o);
    }
    for (key, value) in [("eps", args.eps), ("amp", args.amp), ("lambda", args.lambda)] {
        if let Some(v) = value {
            cfg.params.insert(key.to_string(), v);
        }
    }
    for pair in &args.params {
        let (key, value) = pair.split_once('=').ok_or_else(|| asympt::Error::InvalidParam {
            param: "param",
            reason: format!("expected KEY=VALUE, got '{pair}'"),
        })?;
        let v: f64 = value.trim().parse().map_err(|_| asympt::Error::InvalidParam {
            param: "param",
            reason: format!("'{key}' is not a number: '{value}'"),
        })?;
        cfg.params.insert(key.trim().to_string(), v);
    }
    if let Some(f) = args.format {
        cfg.format = f.parse()?;
    }
    if let Some(o) = args.out {
        cfg.out = Some(o);
    }
    if let Some(t) = args.tol {
        cfg.tol = t;
    }
    if let Some(m) = args.max_error {
        cfg.max_error = Some(m);
    }
    if let Some(j) = args.jobs {
        cfg.jobs = j;
    }
    if !axes.is_empty() {
        cfg.axes = axes.iter().map(|a| SweepAxis::parse(a)).collect::<asympt::Result<_>>()?;
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, text: &str) -> i32 {
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 3;
            }
            0
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return 3;
            }
            0
        }
    }
}

fn run_solve(cfg: &RunConfig) -> i32 {
    let out = match exec::solve(cfg) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    let text = match cfg.format {
        OutputFormat::Json => to_json_pretty(&out.report),
        OutputFormat::Csv => out.table.to_csv(),
    };
    let status = emit(cfg, &text);
    if status != 0 {
        return status;
    }
    if let (Some(bound), Some(rel)) = (cfg.max_error, out.report.oracle.rel_error) {
        if rel > bound {
            eprintln!("error: oracle relative error {rel:e} exceeds --max-error {bound:e}");
            return EXIT_ORACLE_DISAGREEMENT;
        }
    }
    0
}

fn run_sweep(cfg: &RunConfig) -> i32 {
    let report = match exec::sweep(cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let text = match cfg.format {
        OutputFormat::Json => to_json_pretty(&report),
        OutputFormat::Csv => sweep_csv(&report),
    };
    emit(cfg, &text)
}
