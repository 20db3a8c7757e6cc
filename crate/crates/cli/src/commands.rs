use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fracwin::analysis::{
    check_theorem4, check_theorem5, compare_theorem3, ComparisonReport, ComparisonVerdict,
    LyapunovCandidate, StabilityReport, StructuralSpec,
};
use fracwin::grid::aligned_steps;
use fracwin::operators::{caputo_l1_all, rl_integral_all, short_memory_l1_all};
use fracwin::solver::{solve_short_memory, Solution, SolveStatus};
use fracwin::sysdsl::parse_expr;
use fracwin::{memory_threshold, Order, Trajectory, UniformGrid, Window};
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::output::{csv_writer, fmt_g12, write_comparison, write_file, write_trajectory};

/// Result of a command that ran to completion. `passed` is false when a
/// requested check failed or the solve was aborted.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub passed: bool,
    pub report: String,
    pub files: Vec<PathBuf>,
}

/// Which checks a scenario run performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    pub comparison: bool,
    pub lyapunov: bool,
    pub structural: bool,
}

impl Checks {
    /// Every check the config asks for.
    pub fn requested(cfg: &ScenarioConfig) -> Self {
        Checks {
            comparison: cfg.compare_a.is_some(),
            lyapunov: cfg.lyapunov.is_some(),
            structural: cfg.structural.is_some(),
        }
    }
}

fn solve(cfg: &ScenarioConfig) -> Result<Solution, CliError> {
    Ok(solve_short_memory(&cfg.system(), &cfg.solve_config())?)
}

fn comparison(cfg: &ScenarioConfig, run: &Solution) -> Result<ComparisonReport, CliError> {
    let a = cfg
        .compare_a
        .ok_or_else(|| CliError::Config("the comparison needs 'compare_a'".into()))?;
    Ok(compare_theorem3(run, cfg.order(), cfg.window(), a, &cfg.solve_config())?)
}

fn lyapunov(cfg: &ScenarioConfig, run: &Solution) -> Result<StabilityReport, CliError> {
    let (v, lambda) = cfg
        .candidate()
        .ok_or_else(|| CliError::Config("the Lyapunov check needs 'V' and 'lambda'".into()))?;
    let cand = LyapunovCandidate::new(v, lambda)?;
    Ok(check_theorem4(&cfg.system(), &cand, run, &cfg.sample_box(), &cfg.sample_plan())?)
}

fn structural(cfg: &ScenarioConfig) -> Result<StabilityReport, CliError> {
    let (m, phi) = cfg
        .structural
        .clone()
        .ok_or_else(|| CliError::Config("the structural check needs 'm' and 'phi'".into()))?;
    let spec = StructuralSpec::new(m, phi)?;
    Ok(check_theorem5(
        &cfg.vector_field(),
        &spec,
        cfg.order(),
        cfg.window(),
        &cfg.sample_box(),
        &cfg.sample_times(),
        &cfg.sample_plan(),
    )?)
}

fn scenario_header(cfg: &ScenarioConfig) -> String {
    let mut out = format!("scenario: {}\n\n[inputs]\n", cfg.name);
    let _ = writeln!(out, "alpha = {}", cfg.alpha);
    let _ = writeln!(out, "omega = {}", cfg.omega);
    let _ = writeln!(out, "t0 = {}", cfg.t0);
    let x0: Vec<String> = cfg.x0.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "x0 = {}", x0.join(", "));
    let _ = writeln!(out, "horizon = {}", cfg.horizon);
    let _ = writeln!(out, "step = {}", cfg.step);
    for (i, f) in cfg.field.iter().enumerate() {
        let _ = writeln!(out, "f{} = {f}", i + 1);
    }
    let _ = writeln!(out, "seed = {}", cfg.seed);
    out
}

fn solve_section(run: &Solution) -> (String, bool) {
    let traj = &run.trajectory;
    let last = traj.len() - 1;
    let mut out = String::from("\n[solve]\n");
    let _ = writeln!(out, "nodes = {}", traj.len());
    let state: Vec<String> = traj.last_state().iter().map(|v| fmt_g12(*v)).collect();
    let _ = writeln!(out, "final t = {}", fmt_g12(traj.grid().node(last)));
    let _ = writeln!(out, "final state = ({})", state.join(", "));
    let _ = writeln!(out, "final norm = {}", fmt_g12(traj.norm_at(last)));
    match &run.status {
        SolveStatus::Completed => {
            out.push_str("status = completed\n");
            (out, true)
        }
        SolveStatus::Aborted { index, cause } => {
            let _ = writeln!(out, "status = aborted at node {index}: {cause}");
            (out, false)
        }
    }
}

/// Solves a scenario, runs the selected checks and writes
/// `<name>_trajectory.csv`, `<name>_comparison.csv` (when compared) and
/// `<name>_report.txt` under `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, checks: Checks, out_dir: &Path) -> Result<Outcome, CliError> {
    let run = solve(cfg)?;
    let mut outcome = Outcome::default();
    let (solve_text, completed) = solve_section(&run);
    let mut report = scenario_header(cfg);
    report.push_str(&solve_text);
    let mut verdicts = Vec::new();

    let traj_path = out_dir.join(format!("{}_trajectory.csv", cfg.name));
    write_file(&traj_path, |buf| write_trajectory(&run.trajectory, buf))?;
    outcome.files.push(traj_path);

    if checks.comparison {
        let cmp = comparison(cfg, &run)?;
        let path = out_dir.join(format!("{}_comparison.csv", cfg.name));
        write_file(&path, |buf| write_comparison(&cmp, buf))?;
        outcome.files.push(path);
        report.push_str("\n---\n");
        report.push_str(&cmp.render());
        verdicts.push(("theorem3", cmp.holds(), cmp.verdict.to_string()));
    }
    if checks.lyapunov {
        let r = lyapunov(cfg, &run)?;
        report.push_str("\n---\n");
        report.push_str(&r.render());
        verdicts.push(("theorem4", r.is_certified(), r.verdict.to_string()));
    }
    if checks.structural {
        let r = structural(cfg)?;
        report.push_str("\n---\n");
        report.push_str(&r.render());
        verdicts.push(("theorem5", r.is_certified(), r.verdict.to_string()));
    }

    report.push_str("\n---\n[summary]\n");
    let _ = writeln!(report, "solve: {}", if completed { "completed" } else { "aborted" });
    for (id, _, text) in &verdicts {
        let _ = writeln!(report, "{id}: {text}");
    }
    outcome.passed = completed && verdicts.iter().all(|(_, ok, _)| *ok);

    let report_path = out_dir.join(format!("{}_report.txt", cfg.name));
    write_file(&report_path, |buf| {
        buf.extend_from_slice(report.as_bytes());
        Ok(())
    })?;
    outcome.files.push(report_path);
    outcome.report = report;
    Ok(outcome)
}

/// Structural check alone; it needs no solve.
pub fn run_theorem5(cfg: &ScenarioConfig, out_dir: &Path) -> Result<Outcome, CliError> {
    let r = structural(cfg)?;
    let report = format!("{}\n---\n{}", scenario_header(cfg), r.render());
    let path = out_dir.join(format!("{}_theorem5_report.txt", cfg.name));
    write_file(&path, |buf| {
        buf.extend_from_slice(report.as_bytes());
        Ok(())
    })?;
    Ok(Outcome { passed: r.is_certified(), report, files: vec![path] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Caputo,
    RlIntegral,
    ShortMemory,
}

impl OperatorKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "caputo" => Some(OperatorKind::Caputo),
            "rlint" => Some(OperatorKind::RlIntegral),
            "short" => Some(OperatorKind::ShortMemory),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorRequest {
    pub kind: OperatorKind,
    pub alpha: f64,
    pub omega: Option<f64>,
    pub expr: String,
    pub t0: f64,
    pub h: f64,
    pub at: f64,
}

/// Samples `expr(t)` on `[t0, at]` and applies the operator at every node.
/// Returns the grid and the operator values; the last value is the one at `at`.
pub fn eval_operator(req: &OperatorRequest) -> Result<(UniformGrid, Vec<f64>), CliError> {
    let order = Order::new(req.alpha)?;
    let expr = parse_expr(&req.expr, 0)?;
    if !(req.at > req.t0) {
        return Err(CliError::Config(format!("at = {} must exceed t0 = {}", req.at, req.t0)));
    }
    let n = aligned_steps("at - t0", req.at - req.t0, req.h)?;
    let grid = UniformGrid::new(req.t0, req.h, n)?;
    let mut values = Vec::with_capacity(grid.len());
    for t in grid.nodes() {
        let v = expr.eval(&[], t).map_err(|e| CliError::Config(format!("at t = {t}: {e}")))?;
        values.push(v);
    }
    let x = Trajectory::scalar(grid, values)?;
    let out = match req.kind {
        OperatorKind::Caputo => caputo_l1_all(&x, order)?,
        OperatorKind::RlIntegral => rl_integral_all(&x, order)?,
        OperatorKind::ShortMemory => {
            let omega = req
                .omega
                .ok_or_else(|| CliError::Config("the short-memory operator needs --omega".into()))?;
            let win = Window::new(omega, req.t0)?;
            short_memory_l1_all(&x, order, win)?
        }
    };
    Ok((grid, out))
}

/// `t,value` for every node of an operator evaluation.
pub fn write_operator_sequence(grid: &UniformGrid, values: &[f64], path: &Path) -> Result<(), CliError> {
    write_file(path, |buf| {
        let mut out = csv_writer(buf);
        out.write_record(["t", "value"])?;
        for (t, v) in grid.nodes().zip(values) {
            out.write_record([fmt_g12(t), fmt_g12(*v)])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Omega,
    Lambda,
}

impl SweepAxis {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "alpha" => Some(SweepAxis::Alpha),
            "omega" => Some(SweepAxis::Omega),
            "lambda" => Some(SweepAxis::Lambda),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::Omega => "omega",
            SweepAxis::Lambda => "lambda",
        }
    }
}

/// One sweep cell. Verdict columns are `None` for checks the config does not
/// request; `error` is set when the cell could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub threshold: Option<f64>,
    pub theorem3: Option<String>,
    pub theorem4: Option<String>,
    pub theorem5: Option<String>,
    pub final_norm: Option<f64>,
    pub solve_status: Option<String>,
    pub error: Option<String>,
}

impl SweepRow {
    /// True when the solve completed and every requested check passed.
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.solve_status.as_deref() == Some("completed")
            && [&self.theorem3, &self.theorem4, &self.theorem5]
                .iter()
                .all(|v| v.as_deref().is_none_or(|s| s == "holds" || s == "certified"))
    }
}

fn with_axis(base: &ScenarioConfig, axis: SweepAxis, value: f64) -> Result<ScenarioConfig, CliError> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::Alpha => cfg.alpha = value,
        SweepAxis::Omega => cfg.omega = value,
        SweepAxis::Lambda => match &mut cfg.lyapunov {
            Some((_, l)) => *l = value,
            None => return Err(CliError::Config("sweeping lambda needs 'V' in the config".into())),
        },
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sweep_cell(base: &ScenarioConfig, axis: SweepAxis, value: f64) -> SweepRow {
    let mut row = SweepRow {
        value,
        threshold: None,
        theorem3: None,
        theorem4: None,
        theorem5: None,
        final_norm: None,
        solve_status: None,
        error: None,
    };
    let result = (|| -> Result<(), CliError> {
        let cfg = with_axis(base, axis, value)?;
        row.threshold = Some(memory_threshold(cfg.order(), cfg.window()));
        let run = solve(&cfg)?;
        let last = run.trajectory.len() - 1;
        row.final_norm = Some(run.trajectory.norm_at(last));
        row.solve_status = Some(match &run.status {
            SolveStatus::Completed => "completed".into(),
            SolveStatus::Aborted { index, .. } => format!("aborted at node {index}"),
        });
        if cfg.compare_a.is_some() {
            row.theorem3 = Some(match comparison(&cfg, &run)?.verdict {
                ComparisonVerdict::Holds => "holds".into(),
                ComparisonVerdict::Violated { .. } => "violated".into(),
                ComparisonVerdict::Inapplicable(_) => "inapplicable".into(),
            });
        }
        let label = |r: StabilityReport| if r.is_certified() { "certified" } else { "not-certified" }.to_string();
        if cfg.lyapunov.is_some() {
            row.theorem4 = Some(label(lyapunov(&cfg, &run)?));
        }
        if cfg.structural.is_some() {
            row.theorem5 = Some(label(structural(&cfg)?));
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

/// Evaluates every value independently on a bounded worker pool. Rows come
/// back in input order.
pub fn sweep(base: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Vec<SweepRow> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| values.par_iter().map(|&v| sweep_cell(base, axis, v)).collect()),
        Err(_) => values.iter().map(|&v| sweep_cell(base, axis, v)).collect(),
    }
}

pub fn write_sweep<W: std::io::Write>(axis: SweepAxis, rows: &[SweepRow], w: W) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    out.write_record([axis.name(), "threshold", "theorem3", "theorem4", "theorem5", "final_norm", "solve", "error"])?;
    let num = |v: Option<f64>| v.map(fmt_g12).unwrap_or_default();
    let text = |v: &Option<String>| v.clone().unwrap_or_default();
    for r in rows {
        out.write_record([
            fmt_g12(r.value),
            num(r.threshold),
            text(&r.theorem3),
            text(&r.theorem4),
            text(&r.theorem5),
            num(r.final_norm),
            text(&r.solve_status),
            text(&r.error),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}
