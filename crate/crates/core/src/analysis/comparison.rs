use std::fmt::Write as _;

use super::report::{input, render_inputs, render_notes};
use super::{discretization_tolerance, AnalysisError};
use crate::grid::{Order, UniformGrid, Window};
use crate::operators::memory_threshold;
use crate::solver::{
    solve_caputo_delay, DelayLinearSystem, History, Solution, SolveConfig, SolveStatus,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ComparisonVerdict {
    Holds,
    /// First node where `x_j - y_j` exceeds the tolerance.
    Violated { first_index: usize },
    Inapplicable(String),
}

impl std::fmt::Display for ComparisonVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComparisonVerdict::Holds => f.write_str("holds"),
            ComparisonVerdict::Violated { first_index } => {
                write!(f, "violated (first at node {first_index})")
            }
            ComparisonVerdict::Inapplicable(reason) => write!(f, "inapplicable ({reason})"),
        }
    }
}

/// Grid-wise comparison `x(t) <= y(t)` between a short-memory run `x` and the
/// bounding delayed Caputo system `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub grid: UniformGrid,
    /// The short-memory trajectory `x`.
    pub lhs: Vec<f64>,
    /// The bounding delayed trajectory `y`.
    pub rhs: Vec<f64>,
    /// `max_j (x_j - y_j)`.
    pub max_violation: f64,
    pub tolerance: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub omega: f64,
    pub verdict: ComparisonVerdict,
}

impl ComparisonReport {
    pub fn holds(&self) -> bool {
        self.verdict == ComparisonVerdict::Holds
    }

    /// `x_j - y_j` at every node.
    pub fn violations(&self) -> Vec<f64> {
        self.lhs.iter().zip(&self.rhs).map(|(x, y)| x - y).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::from("criterion: theorem3 (short-memory comparison x(t) <= y(t))\n");
        let inputs = vec![
            input("alpha", self.alpha),
            input("omega", self.omega),
            input("a", self.a),
            input("x0", self.lhs.first().copied().unwrap_or(f64::NAN)),
            input("t0", self.grid.t0()),
            input("h", self.grid.h()),
            input("t_end", self.grid.t_end()),
        ];
        render_inputs(&mut out, &inputs);
        out.push_str("\n[thresholds]\n");
        let _ = writeln!(out, "memory threshold b = 1/(omega^alpha Gamma(1-alpha)) = {:.12e}", self.b);
        let _ = writeln!(out, "tolerance = {:.3e}", self.tolerance);
        out.push_str("\n[margins]\n");
        let _ = writeln!(out, "max_j (x_j - y_j) = {:.6e}", self.max_violation);
        let min_x = self.lhs.iter().copied().fold(f64::INFINITY, f64::min);
        let min_y = self.rhs.iter().copied().fold(f64::INFINITY, f64::min);
        let _ = writeln!(out, "min x = {min_x:.6e}, min y = {min_y:.6e}");
        let _ = writeln!(out, "\n[verdict]\n{}", self.verdict);
        render_notes(
            &mut out,
            &[
                "strict inequalities are checked up to the discrete tolerance C h^(1-alpha)".into(),
                "the comparison is only asserted while both trajectories stay nonnegative".into(),
                "bounding system: D^alpha y = -a y + b y(t - omega), y = x(t0) on [t0 - omega, t0]".into(),
            ],
        );
        out
    }
}

/// Solves the bounding system `D^alpha y = -a y + b y(t - omega)` with
/// `b = 1/(omega^alpha Gamma(1-alpha))` and constant history `x(t0)`, then
/// compares it node by node with the short-memory run.
///
/// The verdict is `Inapplicable` when either run was aborted or dips below
/// `-tolerance`, since the comparison needs nonnegative trajectories.
pub fn compare_theorem3(
    short_run: &Solution,
    order: Order,
    win: Window,
    a: f64,
    cfg: &SolveConfig,
) -> Result<ComparisonReport, AnalysisError> {
    if !(a > 0.0) {
        return Err(AnalysisError::NonPositiveRate(a));
    }
    let x = &short_run.trajectory;
    if x.dim() != 1 {
        return Err(AnalysisError::DimensionMismatch { expected: 1, got: x.dim() });
    }
    let grid = cfg.grid()?;
    win.steps_on(&grid)?;
    let aborted = !short_run.is_complete();
    if !aborted && *x.grid() != grid {
        return Err(AnalysisError::GridMismatch {
            expected: format!("{grid:?}"),
            got: format!("{:?}", x.grid()),
        });
    }
    let tolerance = discretization_tolerance(order, grid.h());
    let b = memory_threshold(order, win);
    let x0 = x.state(0)[0];
    let bound_sys = DelayLinearSystem::new(a, b, win.omega(), History::Constant(x0))?;
    let bound = solve_caputo_delay(&bound_sys, order, cfg)?;

    let make = |lhs: Vec<f64>, rhs: Vec<f64>, grid: UniformGrid, verdict| {
        let max_violation =
            lhs.iter().zip(&rhs).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max);
        ComparisonReport {
            grid,
            lhs,
            rhs,
            max_violation,
            tolerance,
            a,
            b,
            alpha: order.alpha(),
            omega: win.omega(),
            verdict,
        }
    };

    let common = x.len().min(bound.trajectory.len());
    let lhs: Vec<f64> = x.as_flat()[..common].to_vec();
    let rhs: Vec<f64> = bound.trajectory.as_flat()[..common].to_vec();
    let shown = grid.truncated(common - 1);

    if let SolveStatus::Aborted { index, cause } = &short_run.status {
        let reason = format!("short-memory run aborted at node {index}: {cause}");
        return Ok(make(lhs, rhs, shown, ComparisonVerdict::Inapplicable(reason)));
    }
    if let SolveStatus::Aborted { index, cause } = &bound.status {
        let reason = format!("bounding run aborted at node {index}: {cause}");
        return Ok(make(lhs, rhs, shown, ComparisonVerdict::Inapplicable(reason)));
    }
    if let Some(j) = first_below(&lhs, -tolerance) {
        let reason = format!("short-memory trajectory is negative at node {j}");
        return Ok(make(lhs, rhs, grid, ComparisonVerdict::Inapplicable(reason)));
    }
    if let Some(j) = first_below(&rhs, -tolerance) {
        let reason = format!("bounding trajectory is negative at node {j}");
        return Ok(make(lhs, rhs, grid, ComparisonVerdict::Inapplicable(reason)));
    }
    let verdict = match lhs.iter().zip(&rhs).position(|(x, y)| x - y > tolerance) {
        None => ComparisonVerdict::Holds,
        Some(first_index) => ComparisonVerdict::Violated { first_index },
    };
    Ok(make(lhs, rhs, grid, verdict))
}

fn first_below(values: &[f64], floor: f64) -> Option<usize> {
    values.iter().position(|v| *v < floor)
}

