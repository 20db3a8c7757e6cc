//! Short-memory fractional calculus.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`]: the Gamma function used by every operator scale factor.
//! * [`grid`]: orders, sliding windows, uniform grids and trajectories.
//! * [`operators`]: discrete Caputo (L1), Riemann–Liouville (product
//!   trapezoid) and sliding-window Caputo operators.
//! * [`solver`]: fractional Adams–Bashforth–Moulton integrators for plain,
//!   delayed and short-memory systems.
//! * [`analysis`]: comparison, Lyapunov and structural stability checks.
//! * [`sysdsl`]: the expression language used to describe systems.

pub mod analysis;
pub mod grid;
pub mod operators;
pub mod solver;
pub mod special;
pub mod sysdsl;

pub use grid::{GridError, Order, Trajectory, UniformGrid, Window};
pub use operators::{caputo_l1, memory_threshold, rl_integral, short_memory_l1, OperatorError};
pub use special::gamma;
