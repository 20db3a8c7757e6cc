//! Fractional Adams–Bashforth–Moulton integrators.
//!
//! Three front ends share one predictor–corrector engine:
//!
//! * [`solve_caputo`] for `D^alpha x = f(x, t)`,
//! * [`solve_caputo_delay`] for the scalar delayed system
//!   `D^alpha x = -a x(t) + b x(t - q)`,
//! * [`solve_short_memory`] for the sliding-window system, integrated as the
//!   equivalent Caputo system whose right-hand side carries the forgotten
//!   history explicitly.
//!
//! The engine keeps the whole trajectory, so a solve over `N` steps costs
//! `O(N^2)` work and `O(N)` memory.

mod abm;
mod delay;
mod field;
mod residual;
mod short_memory;

use thiserror::Error;

use crate::grid::{GridError, Trajectory, UniformGrid};
use crate::operators::OperatorError;

pub use delay::{solve_caputo_delay, DelayLinearSystem, History};
pub use field::{FieldError, FnField, VectorField};
pub use residual::residual_check;
pub use short_memory::{solve_short_memory, ShortMemorySystem};

use crate::grid::Order;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("initial state has {got} components, the field expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("initial state must be finite")]
    NonFiniteInitial,
    #[error("corrector_sweeps must be at least 1")]
    NoCorrectorSweeps,
    #[error("blow-up bound must be positive, got {0}")]
    InvalidBlowupBound(f64),
    #[error("delay must be positive, got {0}")]
    InvalidDelay(f64),
    #[error("field evaluation failed at t = {t}: {source}")]
    Field { t: f64, source: FieldError },
    #[error("solve aborted at node {index}: {cause}")]
    Aborted { index: usize, cause: AbortCause },
}

/// Time-stepping parameters shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub t0: f64,
    pub h: f64,
    pub t_end: f64,
    pub corrector_sweeps: usize,
    pub blowup_bound: f64,
}

impl SolveConfig {
    /// One corrector sweep (PECE) and a blow-up bound of 1e8.
    pub fn new(t0: f64, t_end: f64, h: f64) -> Self {
        SolveConfig { t0, h, t_end, corrector_sweeps: 1, blowup_bound: 1e8 }
    }

    pub fn with_corrector_sweeps(mut self, sweeps: usize) -> Self {
        self.corrector_sweeps = sweeps;
        self
    }

    pub fn with_blowup_bound(mut self, bound: f64) -> Self {
        self.blowup_bound = bound;
        self
    }

    pub fn grid(&self) -> Result<UniformGrid, SolveError> {
        if self.corrector_sweeps == 0 {
            return Err(SolveError::NoCorrectorSweeps);
        }
        if !(self.blowup_bound > 0.0) {
            return Err(SolveError::InvalidBlowupBound(self.blowup_bound));
        }
        Ok(UniformGrid::spanning(self.t0, self.t_end, self.h)?)
    }
}

/// Why a solve stopped early.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbortCause {
    #[error("|x| exceeded the blow-up bound {0}")]
    BlowUp(f64),
    #[error("non-finite state or right-hand side")]
    NonFinite,
    #[error("field evaluation failed: {0}")]
    Field(FieldError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Completed,
    /// The state at `index` was rejected; the trajectory ends at `index - 1`
    /// (or holds only the initial state when `index == 0`).
    Aborted { index: usize, cause: AbortCause },
}

/// Result of a solve: the accepted nodes plus how the run ended.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub trajectory: Trajectory,
    pub status: SolveStatus,
}

impl Solution {
    pub fn is_complete(&self) -> bool {
        self.status == SolveStatus::Completed
    }

    /// The trajectory of a completed run, or the abort as an error.
    pub fn into_complete(self) -> Result<Trajectory, SolveError> {
        match self.status {
            SolveStatus::Completed => Ok(self.trajectory),
            SolveStatus::Aborted { index, cause } => Err(SolveError::Aborted { index, cause }),
        }
    }
}

impl From<Trajectory> for Solution {
    fn from(trajectory: Trajectory) -> Self {
        Solution { trajectory, status: SolveStatus::Completed }
    }
}

/// Integrates `D^alpha x = f(x, t)` with the fractional Adams–Bashforth–Moulton
/// scheme: a product-rectangle predictor followed by `corrector_sweeps`
/// product-trapezoid corrections.
pub fn solve_caputo<F: VectorField + ?Sized>(
    field: &F,
    order: Order,
    x0: &[f64],
    cfg: &SolveConfig,
) -> Result<Solution, SolveError> {
    let grid = cfg.grid()?;
    check_initial(field.dim(), x0)?;
    abm::integrate(&abm::PlainRhs(field), order, x0, grid, cfg)
}

pub(crate) fn check_initial(dim: usize, x0: &[f64]) -> Result<(), SolveError> {
    if x0.len() != dim {
        return Err(SolveError::DimensionMismatch { expected: dim, got: x0.len() });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(SolveError::NonFiniteInitial);
    }
    Ok(())
}
