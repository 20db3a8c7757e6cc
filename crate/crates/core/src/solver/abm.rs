//! Predictor–corrector engine shared by all solvers.
//!
//! Every right-hand side handled here splits as
//! `g(x, t_n) = field(x, t_n) + memory_n`, where `memory_n` depends only on
//! states already accepted (delayed samples, forgotten history). The memory
//! term is computed once per step and reused by every corrector sweep.

use super::{AbortCause, FieldError, Solution, SolveConfig, SolveError, SolveStatus, VectorField};
use crate::grid::{Order, Trajectory, UniformGrid};
use crate::operators::{rl_scale, PowerTable};
use crate::special::gamma_positive;

pub(crate) trait SplitRhs {
    fn dim(&self) -> usize;

    /// State-independent part of the right-hand side at node `n`, from the
    /// accepted states `0..n` (node-major in `history`) and the initial
    /// state. Returns `false` when the node carries no memory term.
    fn memory(&self, n: usize, t: f64, history: &[f64], out: &mut [f64]) -> bool;

    fn field(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError>;
}

pub(crate) struct PlainRhs<'a, F: ?Sized>(pub &'a F);

impl<F: VectorField + ?Sized> SplitRhs for PlainRhs<'_, F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn memory(&self, _n: usize, _t: f64, _history: &[f64], _out: &mut [f64]) -> bool {
        false
    }

    fn field(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        self.0.eval(x, t, out)
    }
}

/// `g = field + memory`, leaving `out` untouched by the memory when there is none.
fn eval_rhs<R: SplitRhs + ?Sized>(
    rhs: &R,
    x: &[f64],
    t: f64,
    memory: Option<&[f64]>,
    out: &mut [f64],
) -> Result<(), FieldError> {
    rhs.field(x, t, out)?;
    if let Some(m) = memory {
        for (o, m) in out.iter_mut().zip(m) {
            *o += m;
        }
    }
    Ok(())
}

pub(crate) fn integrate<R: SplitRhs + ?Sized>(
    rhs: &R,
    order: Order,
    x0: &[f64],
    grid: UniformGrid,
    cfg: &SolveConfig,
) -> Result<Solution, SolveError> {
    let dim = rhs.dim();
    let alpha = order.alpha();
    let n_steps = grid.n_steps();
    let h = grid.h();
    let table = PowerTable::new(alpha, n_steps);
    let predictor_scale = h.powf(alpha) / gamma_positive(alpha + 1.0);
    let corrector_scale = rl_scale(alpha, h);

    let mut states = Vec::with_capacity((n_steps + 1) * dim);
    let mut slopes = Vec::with_capacity((n_steps + 1) * dim);
    states.extend_from_slice(x0);

    let mut memory = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    let mut predicted = vec![0.0; dim];
    let mut corrected = vec![0.0; dim];
    let mut rect_sum = vec![0.0; dim];
    let mut trap_sum = vec![0.0; dim];

    let abort = |states: Vec<f64>, index: usize, cause: AbortCause| -> Result<Solution, SolveError> {
        let last = index.saturating_sub(1);
        let trajectory = Trajectory::new(grid.truncated(last), dim, states)?;
        Ok(Solution { trajectory, status: SolveStatus::Aborted { index, cause } })
    };

    let t0 = grid.node(0);
    let has_memory = rhs.memory(0, t0, &states[..0], &mut memory);
    if let Err(e) = eval_rhs(rhs, x0, t0, has_memory.then_some(&memory[..]), &mut g) {
        return abort(states, 0, AbortCause::Field(e));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return abort(states, 0, AbortCause::NonFinite);
    }
    slopes.extend_from_slice(&g);

    for n in 0..n_steps {
        let next = n + 1;
        let t = grid.node(next);

        rect_sum.fill(0.0);
        trap_sum.fill(0.0);
        for (j, f) in slopes.chunks_exact(dim).enumerate() {
            let lag = next - j;
            let rect = table.rectangle(lag);
            let trap = if j == 0 { table.first(next) } else { table.interior(lag) };
            for d in 0..dim {
                rect_sum[d] += rect * f[d];
                trap_sum[d] += trap * f[d];
            }
        }

        for d in 0..dim {
            predicted[d] = x0[d] + predictor_scale * rect_sum[d];
        }

        let has_memory = rhs.memory(next, t, &states, &mut memory);
        let memory_term = has_memory.then_some(&memory[..]);
        for _ in 0..cfg.corrector_sweeps {
            if let Err(e) = eval_rhs(rhs, &predicted, t, memory_term, &mut g) {
                return abort(states, next, AbortCause::Field(e));
            }
            for d in 0..dim {
                corrected[d] = x0[d] + corrector_scale * (g[d] + trap_sum[d]);
            }
            predicted.copy_from_slice(&corrected);
        }

        if corrected.iter().any(|v| !v.is_finite()) {
            return abort(states, next, AbortCause::NonFinite);
        }
        if corrected.iter().any(|v| v.abs() > cfg.blowup_bound) {
            return abort(states, next, AbortCause::BlowUp(cfg.blowup_bound));
        }
        if let Err(e) = eval_rhs(rhs, &corrected, t, memory_term, &mut g) {
            return abort(states, next, AbortCause::Field(e));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return abort(states, next, AbortCause::NonFinite);
        }
        states.extend_from_slice(&corrected);
        slopes.extend_from_slice(&g);
    }

    let trajectory = Trajectory::new(grid, dim, states)?;
    Ok(Solution { trajectory, status: SolveStatus::Completed })
}
