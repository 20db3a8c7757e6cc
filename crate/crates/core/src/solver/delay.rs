use std::fmt;
use std::sync::Arc;

use super::abm::{self, SplitRhs};
use super::{FieldError, Solution, SolveConfig, SolveError};
use crate::grid::{aligned_steps, Order};

/// Initial function of a delayed system on `[t0 - q, t0]`.
#[derive(Clone)]
pub enum History {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl History {
    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        History::Function(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> f64 {
        match self {
            History::Constant(c) => *c,
            History::Function(f) => f(t),
        }
    }
}

impl fmt::Debug for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            History::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            History::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// `D^alpha x(t) = -a x(t) + b x(t - q)` with `x = history` on `[t0 - q, t0]`.
#[derive(Debug, Clone)]
pub struct DelayLinearSystem {
    pub a: f64,
    pub b: f64,
    pub q: f64,
    pub history: History,
}

impl DelayLinearSystem {
    pub fn new(a: f64, b: f64, q: f64, history: History) -> Result<Self, SolveError> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(SolveError::InvalidDelay(q));
        }
        Ok(DelayLinearSystem { a, b, q, history })
    }
}

struct DelayRhs<'a> {
    sys: &'a DelayLinearSystem,
    lag_steps: usize,
}

impl SplitRhs for DelayRhs<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn memory(&self, n: usize, t: f64, history: &[f64], out: &mut [f64]) -> bool {
        let delayed = if n <= self.lag_steps {
            self.sys.history.at(t - self.sys.q)
        } else {
            history[n - self.lag_steps]
        };
        out[0] = self.sys.b * delayed;
        true
    }

    fn field(&self, x: &[f64], _t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        out[0] = -self.sys.a * x[0];
        Ok(())
    }
}

/// Integrates a scalar linear delayed system on the grid of `cfg`.
///
/// `x(t_n - q)` is read from the history function while `t_n - q <= t0` and
/// from node `n - q/h` afterwards, for the predictor and corrector alike.
pub fn solve_caputo_delay(
    sys: &DelayLinearSystem,
    order: Order,
    cfg: &SolveConfig,
) -> Result<Solution, SolveError> {
    let grid = cfg.grid()?;
    if !(sys.q > 0.0) {
        return Err(SolveError::InvalidDelay(sys.q));
    }
    let lag_steps = aligned_steps("q", sys.q, grid.h())?;
    let x0 = [sys.history.at(grid.t0())];
    super::check_initial(1, &x0)?;
    let rhs = DelayRhs { sys, lag_steps };
    abm::integrate(&rhs, order, &x0, grid, cfg)
}
