use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracwin_cli::commands::{
    eval_operator, run_scenario, run_theorem5, sweep, write_operator_sequence, write_sweep, Checks,
    OperatorKind, OperatorRequest, Outcome, SweepAxis,
};
use fracwin_cli::output::{fmt_g12, write_file};
use fracwin_cli::{scenarios, CliError, Overrides, ScenarioConfig};

/// Short-memory fractional systems: solve, compare and check stability.
///
/// Exit status: 0 when every requested check holds, 1 when a check fails or
/// a solve aborts, 2 on configuration or runtime errors.
#[derive(Debug, Parser)]
#[command(name = "fracwin", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Scenario config file (used when no scenario name is given).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", env = "FRACWIN_OUT_DIR", default_value = "out")]
    out: PathBuf,
    /// Step size, overriding the config.
    #[arg(long, global = true, value_name = "H")]
    step: Option<f64>,
    /// Final time, overriding the config.
    #[arg(long, global = true, value_name = "T")]
    horizon: Option<f64>,
    /// Sampling seed, overriding the config.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a scenario and run every check its config requests.
    Scenario {
        /// example1, example2, example3 or a config path.
        name: Option<String>,
    },
    /// Compare a scalar run with its delayed bounding system.
    Compare {
        name: Option<String>,
        /// Decay rate a of the bounding system.
        #[arg(long)]
        a: Option<f64>,
    },
    /// Check a Lyapunov candidate along the solved trajectory.
    Lyapunov {
        name: Option<String>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Check the structural power-law criterion on the sample box.
    Theorem5 { name: Option<String> },
    /// Apply a discrete operator to an expression in t.
    Operator {
        /// caputo, rlint or short.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        alpha: f64,
        /// Window length (short only).
        #[arg(long)]
        omega: Option<f64>,
        /// Expression in t, e.g. "sin(t)".
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Time at which to report the value.
        #[arg(long)]
        at: f64,
        /// Also write every node to operator_<kind>.csv.
        #[arg(long)]
        sequence: bool,
    },
    /// Re-run a scenario over a list of alpha, omega or lambda values.
    Sweep {
        name: Option<String>,
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
}

fn load(name: Option<&str>, g: &Global) -> Result<ScenarioConfig, CliError> {
    let cfg = match (name, &g.config) {
        (Some(n), _) => scenarios::resolve(n)?,
        (None, Some(path)) => ScenarioConfig::from_path(path)?,
        (None, None) => return Err(CliError::Usage("give a scenario name or --config PATH".into())),
    };
    cfg.with_overrides(Overrides { step: g.step, horizon: g.horizon, seed: g.seed })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Scenario { name } => {
            let cfg = load(name.as_deref(), g)?;
            run_scenario(&cfg, Checks::requested(&cfg), &g.out)
        }
        Command::Compare { name, a } => {
            let mut cfg = load(name.as_deref(), g)?;
            if a.is_some() {
                cfg.compare_a = *a;
                cfg.validate()?;
            }
            let checks = Checks { comparison: true, lyapunov: false, structural: false };
            run_scenario(&cfg, checks, &g.out)
        }
        Command::Lyapunov { name, lambda } => {
            let mut cfg = load(name.as_deref(), g)?;
            if let (Some(l), Some((_, current))) = (lambda, cfg.lyapunov.as_mut()) {
                *current = *l;
                cfg.validate()?;
            }
            let checks = Checks { comparison: false, lyapunov: true, structural: false };
            run_scenario(&cfg, checks, &g.out)
        }
        Command::Theorem5 { name } => run_theorem5(&load(name.as_deref(), g)?, &g.out),
        Command::Operator { kind, alpha, omega, expr, t0, at, sequence } => {
            let kind_enum = OperatorKind::from_name(kind)
                .ok_or_else(|| CliError::Usage(format!("unknown operator '{kind}' (caputo, rlint, short)")))?;
            let req = OperatorRequest {
                kind: kind_enum,
                alpha: *alpha,
                omega: *omega,
                expr: expr.clone(),
                t0: *t0,
                h: g.step.unwrap_or(fracwin_cli::config::DEFAULT_STEP),
                at: *at,
            };
            let (grid, values) = eval_operator(&req)?;
            let mut files = Vec::new();
            if *sequence {
                let path = g.out.join(format!("operator_{kind}.csv"));
                write_operator_sequence(&grid, &values, &path)?;
                files.push(path);
            }
            let value = *values.last().expect("grid has at least two nodes");
            Ok(Outcome { passed: true, report: format!("{}\n", fmt_g12(value)), files })
        }
        Command::Sweep { name, axis, values } => {
            let cfg = load(name.as_deref(), g)?;
            let axis = SweepAxis::from_name(axis)
                .ok_or_else(|| CliError::Usage(format!("unknown axis '{axis}' (alpha, omega, lambda)")))?;
            let rows = sweep(&cfg, axis, values);
            let path = g.out.join(format!("{}_sweep_{}.csv", cfg.name, axis.name()));
            write_file(&path, |buf| write_sweep(axis, &rows, buf))?;
            if let Some(bad) = rows.iter().find(|r| r.error.is_some()) {
                return Err(CliError::Config(format!(
                    "sweep cell {} = {} failed: {} (summary written to {})",
                    axis.name(),
                    bad.value,
                    bad.error.as_deref().unwrap_or_default(),
                    path.display()
                )));
            }
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            Ok(Outcome { passed: rows.iter().all(|r| r.passed()), report: text, files: vec![path] })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if !cli.global.quiet {
                print!("{}", outcome.report);
                for f in &outcome.files {
                    eprintln!("wrote {}", f.display());
                }
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
