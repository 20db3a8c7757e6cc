use std::sync::Arc;

use super::report::{fmt_vec, input, Condition, Criterion, StabilityReport};
use super::sampling::{SampleBox, SamplePlan};
use super::{discretization_tolerance, AnalysisError};
use crate::grid::Trajectory;
use crate::operators::{memory_threshold, short_memory_l1_all};
use crate::solver::{FieldError, ShortMemorySystem, Solution, SolveStatus, VectorField};

/// Scalar function `V(x, t)`.
pub trait ScalarField: Send + Sync {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, FieldError>;
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, FieldError> {
        (**self).eval(x, t)
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Box<T> {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, FieldError> {
        (**self).eval(x, t)
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Arc<T> {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, FieldError> {
        (**self).eval(x, t)
    }
}

/// A scalar function backed by a closure `(x, t) -> V`.
#[derive(Clone)]
pub struct FnScalar<F>(pub F);

impl<F> ScalarField for FnScalar<F>
where
    F: Fn(&[f64], f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, FieldError> {
        Ok((self.0)(x, t))
    }
}

impl<F> std::fmt::Debug for FnScalar<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FnScalar(..)")
    }
}

/// Candidate `V` together with the claimed decay rate `lambda > 0`.
#[derive(Debug, Clone)]
pub struct LyapunovCandidate<V> {
    pub v: V,
    lambda: f64,
}

impl<V: ScalarField> LyapunovCandidate<V> {
    pub fn new(v: V, lambda: f64) -> Result<Self, AnalysisError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(AnalysisError::NonPositiveLambda(lambda));
        }
        Ok(LyapunovCandidate { v, lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Checks a Lyapunov candidate for a short-memory system.
///
/// * `threshold`: `lambda > 1/(omega^alpha Gamma(1-alpha))`, exact comparison.
/// * `decay`: with `V_j = V(x_j, t_j)` along `run`, the short-memory L1
///   derivative satisfies `D~V_j <= -lambda V_j + tol` at every node `j >= 1`.
///
/// Node 0 is skipped because every discrete derivative vanishes there while
/// `-lambda V_0` does not. `V` must also be finite on the sample points of
/// `region` (evaluated at the first and last grid times).
pub fn check_theorem4<F: VectorField, V: ScalarField>(
    sys: &ShortMemorySystem<F>,
    cand: &LyapunovCandidate<V>,
    run: &Solution,
    region: &SampleBox,
    plan: &SamplePlan,
) -> Result<StabilityReport, AnalysisError> {
    let traj = &run.trajectory;
    let dim = sys.field.dim();
    if traj.dim() != dim {
        return Err(AnalysisError::DimensionMismatch { expected: dim, got: traj.dim() });
    }
    if region.dim() != dim {
        return Err(AnalysisError::DimensionMismatch { expected: dim, got: region.dim() });
    }
    let grid = *traj.grid();
    sys.window.steps_on(&grid)?;

    for t in [grid.t0(), grid.t_end()] {
        for p in plan.points(region) {
            if !cand.v.eval(&p, t)?.is_finite() {
                return Err(AnalysisError::NonFiniteOnBox { sample: p });
            }
        }
    }

    let mut v_values = Vec::with_capacity(traj.len());
    for (j, x) in traj.states().enumerate() {
        let t = grid.node(j);
        let v = cand.v.eval(x, t)?;
        if !v.is_finite() {
            return Err(AnalysisError::NonFiniteCandidate { node: j, t });
        }
        v_values.push(v);
    }
    let v_traj = Trajectory::scalar(grid, v_values)?;
    let deriv = short_memory_l1_all(&v_traj, sys.order, sys.window)?;
    let lambda = cand.lambda;
    let v = v_traj.as_flat();

    let tolerance = discretization_tolerance(sys.order, grid.h());
    let mut worst: Option<(usize, f64)> = None;
    for j in 1..v.len() {
        let margin = -lambda * v[j] - deriv[j];
        if worst.is_none_or(|(_, m)| margin < m) {
            worst = Some((j, margin));
        }
    }
    let (worst_margin, worst_case) = match worst {
        Some((j, m)) => (
            m,
            Some(format!(
                "node {j}, t = {}, x = {}, V = {:.6e}, D~V = {:.6e}",
                grid.node(j),
                fmt_vec(traj.state(j)),
                v[j],
                deriv[j]
            )),
        ),
        None => (0.0, None),
    };

    let threshold = memory_threshold(sys.order, sys.window);
    let mut conditions = vec![
        Condition::strict("threshold", lambda, threshold),
        Condition::sampled("decay", worst_margin, tolerance, worst_case),
    ];
    if let SolveStatus::Aborted { index, cause } = &run.status {
        conditions.push(Condition {
            name: "complete run".into(),
            measured: traj.len() as f64,
            bound: (*index + 1) as f64,
            margin: traj.len() as f64 - (*index + 1) as f64,
            tolerance: None,
            satisfied: false,
            worst_case: Some(format!("solve aborted at node {index}: {cause}")),
        });
    }

    let v_first = v[0];
    let v_last = *v.last().expect("trajectory holds the initial state");
    let inputs = vec![
        input("alpha", sys.order.alpha()),
        input("omega", sys.window.omega()),
        input("t0", grid.t0()),
        input("h", grid.h()),
        input("t_end", grid.t_end()),
        input("x0", fmt_vec(traj.state(0))),
        input("lambda", lambda),
        input("nodes checked", v.len().saturating_sub(1)),
        input("box lower", fmt_vec(region.lower())),
        input("box upper", fmt_vec(region.upper())),
        input("box samples", plan.points(region).len()),
        input("seed", plan.seed),
    ];
    let notes = vec![
        "the decay inequality is verified only along the computed trajectory, not over the whole state space".into(),
        "positive definiteness of V (the class-K bounds) is assumed, not verified".into(),
        "global stability (radial unboundedness of V) is not verified".into(),
        "node 0 is excluded: the discrete derivative is zero there by construction".into(),
        format!("tolerance = {:e} * h^(1-alpha)", super::TOLERANCE_CONSTANT),
        format!(
            "V(t0) = {v_first:.6e}, V(t_end) = {v_last:.6e}, {}",
            if v_last < v_first { "decreased" } else { "did not decrease" }
        ),
    ];
    Ok(StabilityReport::assemble(
        Criterion::Theorem4,
        inputs,
        vec![("memory threshold".into(), threshold)],
        conditions,
        notes,
    ))
}
