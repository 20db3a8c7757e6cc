//! Orders, sliding windows, uniform time grids and sampled trajectories.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("fractional order must satisfy 0 < alpha < 1, got {0}")]
    InvalidOrder(f64),
    #[error("window length must be positive, got {0}")]
    InvalidWindow(f64),
    #[error("grid step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("grid start must be finite, got {0}")]
    InvalidStart(f64),
    #[error("horizon {t_end} must lie after the start {t0}")]
    EmptySpan { t0: f64, t_end: f64 },
    #[error("{what} = {length} is not an integer multiple of the step h = {h}")]
    Misaligned { what: &'static str, length: f64, h: f64 },
    #[error("window starts at t0 = {window} but the grid starts at t0 = {grid}")]
    OriginMismatch { window: f64, grid: f64 },
    #[error("trajectory needs {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("trajectory dimension must be positive")]
    ZeroDimension,
    #[error("non-finite value at node {node}, component {component}")]
    NonFinite { node: usize, component: usize },
}

/// Fractional order `alpha`, restricted to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(alpha: f64) -> Result<Self, GridError> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Order(alpha))
        } else {
            Err(GridError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Sliding memory window of length `omega` anchored at the initial time `t0`.
///
/// The lower integration limit of the short-memory derivative is
/// [`Window::start_at`]: `t0` while `t <= t0 + omega`, `t - omega` afterwards.
/// An infinite `omega` gives the ordinary Caputo memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    omega: f64,
    t0: f64,
}

impl Window {
    pub fn new(omega: f64, t0: f64) -> Result<Self, GridError> {
        if !(omega > 0.0) {
            return Err(GridError::InvalidWindow(omega));
        }
        if !t0.is_finite() {
            return Err(GridError::InvalidStart(t0));
        }
        Ok(Window { omega, t0 })
    }

    /// A window that never slides.
    pub fn unbounded(t0: f64) -> Self {
        Window { omega: f64::INFINITY, t0 }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn is_unbounded(&self) -> bool {
        self.omega.is_infinite()
    }

    /// The window clock `s_omega(t)`.
    pub fn start_at(&self, t: f64) -> f64 {
        if t <= self.t0 + self.omega {
            self.t0
        } else {
            t - self.omega
        }
    }

    /// Number of grid steps spanned by the window. Fails unless `omega` is an
    /// integer multiple of the grid step and the window shares the grid origin.
    /// An unbounded window reports `usize::MAX`.
    pub fn steps_on(&self, grid: &UniformGrid) -> Result<usize, GridError> {
        if self.t0 != grid.t0() {
            return Err(GridError::OriginMismatch { window: self.t0, grid: grid.t0() });
        }
        if self.is_unbounded() {
            return Ok(usize::MAX);
        }
        aligned_steps("omega", self.omega, grid.h())
    }
}

/// `length / h` as an integer, provided the ratio is integral up to rounding.
pub fn aligned_steps(what: &'static str, length: f64, h: f64) -> Result<usize, GridError> {
    let ratio = length / h;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(GridError::Misaligned { what, length, h });
    }
    Ok(n as usize)
}

/// Uniform grid `t0, t0 + h, ..., t0 + n_steps * h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    t0: f64,
    h: f64,
    n_steps: usize,
}

impl UniformGrid {
    pub fn new(t0: f64, h: f64, n_steps: usize) -> Result<Self, GridError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(GridError::InvalidStep(h));
        }
        if !t0.is_finite() {
            return Err(GridError::InvalidStart(t0));
        }
        Ok(UniformGrid { t0, h, n_steps })
    }

    /// Smallest grid starting at `t0` with step `h` whose last node reaches
    /// `t_end` (a ratio within 1e-9 of an integer is rounded, not ceiled).
    pub fn spanning(t0: f64, t_end: f64, h: f64) -> Result<Self, GridError> {
        if !(t_end > t0) || !t_end.is_finite() {
            return Err(GridError::EmptySpan { t0, t_end });
        }
        let ratio = (t_end - t0) / h;
        let rounded = ratio.round();
        let n = if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
            rounded
        } else {
            ratio.ceil()
        };
        UniformGrid::new(t0, h, n as usize)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t0 + k h`, evaluated directly (no running sum).
    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    pub fn t_end(&self) -> f64 {
        self.node(self.n_steps)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.node(k))
    }

    /// Index of the node closest to `t`, if `t` lies on the grid span.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = ((t - self.t0) / self.h).round();
        if k < 0.0 || k > self.n_steps as f64 {
            return None;
        }
        let k = k as usize;
        if (self.node(k) - t).abs() <= 1e-9 * self.h {
            Some(k)
        } else {
            None
        }
    }

    /// Same grid cut after node `last`.
    pub fn truncated(&self, last: usize) -> Self {
        UniformGrid { n_steps: last.min(self.n_steps), ..*self }
    }
}

/// States sampled on a uniform grid, stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: UniformGrid,
    dim: usize,
    values: Vec<f64>,
}

impl Trajectory {
    /// Wraps node-major `values` (`grid.len() * dim` entries, all finite).
    pub fn new(grid: UniformGrid, dim: usize, values: Vec<f64>) -> Result<Self, GridError> {
        if dim == 0 {
            return Err(GridError::ZeroDimension);
        }
        let expected = grid.len() * dim;
        if values.len() != expected {
            return Err(GridError::LengthMismatch { expected, got: values.len() });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite { node: pos / dim, component: pos % dim });
        }
        Ok(Trajectory { grid, dim, values })
    }

    pub fn scalar(grid: UniformGrid, values: Vec<f64>) -> Result<Self, GridError> {
        Trajectory::new(grid, 1, values)
    }

    /// Samples a scalar function of time on every node.
    pub fn sample(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        Trajectory::scalar(grid, grid.nodes().map(f).collect())
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn state(&self, node: usize) -> &[f64] {
        &self.values[node * self.dim..(node + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    /// Samples of one component, in node order.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.values.iter().skip(i).step_by(self.dim).copied().collect()
    }

    pub fn component_trajectory(&self, i: usize) -> Trajectory {
        Trajectory { grid: self.grid, dim: 1, values: self.component(i) }
    }

    /// Euclidean norm of the state at `node`.
    pub fn norm_at(&self, node: usize) -> f64 {
        self.state(node).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn last_state(&self) -> &[f64] {
        self.state(self.grid.n_steps())
    }
}
