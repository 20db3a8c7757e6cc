use super::abm::{self, SplitRhs};
use super::{FieldError, Solution, SolveConfig, SolveError, VectorField};
use crate::grid::{Order, Window};
use crate::operators::{l1_scale, l1_weights};

/// `D~^alpha x = f(x, t)` with a sliding memory window and `x(t0) = x0`.
#[derive(Debug, Clone)]
pub struct ShortMemorySystem<F> {
    pub field: F,
    pub order: Order,
    pub window: Window,
    pub x0: Vec<f64>,
}

impl<F: VectorField> ShortMemorySystem<F> {
    pub fn new(field: F, order: Order, window: Window, x0: Vec<f64>) -> Result<Self, SolveError> {
        super::check_initial(field.dim(), &x0)?;
        Ok(ShortMemorySystem { field, order, window, x0 })
    }
}

/// Right-hand side of the equivalent Caputo system. Past the first window,
///
/// ```text
/// g(x, t) = f(x, t) + [ x(t-w)/w^a - x(t0)/(t-t0)^a - a * I(t) ] / Gamma(1-a)
/// I(t)    = integral_{t0}^{t-w} (t - s)^(-a-1) x(s) ds
/// ```
///
/// `I` is integrated exactly against the piecewise-linear interpolant of the
/// stored nodes. Integrating by parts on each panel turns the bracket into
///
/// ```text
/// h^(-a) / Gamma(2-a) * sum_{k >= N_w} w_k (x_{n-k} - x_{n-k-1})
/// ```
///
/// with the L1 weights `w_k`, i.e. the panels the window has forgotten. This
/// form is evaluated; it vanishes exactly on constant histories.
struct ReducedRhs<'a, F: ?Sized> {
    field: &'a F,
    window_steps: usize,
    scale: f64,
    weights: Vec<f64>,
}

impl<F: VectorField + ?Sized> SplitRhs for ReducedRhs<'_, F> {
    fn dim(&self) -> usize {
        self.field.dim()
    }

    fn memory(&self, n: usize, _t: f64, history: &[f64], out: &mut [f64]) -> bool {
        if n <= self.window_steps {
            return false;
        }
        let dim = out.len();
        for (d, o) in out.iter_mut().enumerate() {
            let x_at = |i: usize| history[i * dim + d];
            let mut acc = 0.0;
            for k in self.window_steps..n {
                acc += self.weights[k] * (x_at(n - k) - x_at(n - k - 1));
            }
            *o = self.scale * acc;
        }
        true
    }

    fn field(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        self.field.eval(x, t, out)
    }
}

/// Integrates a short-memory system through its equivalent Caputo system.
///
/// The node at exactly `t0 + omega` still uses the plain field. When the
/// window covers the whole horizon the arithmetic is identical to
/// [`super::solve_caputo`].
pub fn solve_short_memory<F: VectorField>(
    sys: &ShortMemorySystem<F>,
    cfg: &SolveConfig,
) -> Result<Solution, SolveError> {
    let grid = cfg.grid()?;
    super::check_initial(sys.field.dim(), &sys.x0)?;
    let window_steps = sys.window.steps_on(&grid)?;
    let alpha = sys.order.alpha();
    let weights = if window_steps < grid.n_steps() {
        l1_weights(alpha, grid.n_steps())
    } else {
        Vec::new()
    };
    let rhs = ReducedRhs {
        field: &sys.field,
        window_steps,
        scale: l1_scale(alpha, grid.h()),
        weights,
    };
    abm::integrate(&rhs, sys.order, &sys.x0, grid, cfg)
}
