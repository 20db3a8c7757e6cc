use super::{ShortMemorySystem, SolveError, VectorField};
use crate::grid::Trajectory;
use crate::operators::short_memory_l1_all;

/// Per-node defect `D~^alpha x_i(t_j) - f_i(x_j, t_j)` of a trajectory against
/// the short-memory system it claims to solve, with the derivative taken by
/// the windowed L1 operator. Returned as a trajectory of the same shape.
pub fn residual_check<F: VectorField>(
    sys: &ShortMemorySystem<F>,
    traj: &Trajectory,
) -> Result<Trajectory, SolveError> {
    let dim = sys.field.dim();
    if traj.dim() != dim {
        return Err(SolveError::DimensionMismatch { expected: dim, got: traj.dim() });
    }
    let grid = *traj.grid();
    sys.window.steps_on(&grid)?;
    let derivatives = (0..dim)
        .map(|i| short_memory_l1_all(&traj.component_trajectory(i), sys.order, sys.window))
        .collect::<Result<Vec<_>, _>>()?;
    let mut values = Vec::with_capacity(traj.len() * dim);
    let mut f = vec![0.0; dim];
    for (j, state) in traj.states().enumerate() {
        let t = grid.node(j);
        sys.field.eval(state, t, &mut f).map_err(|source| SolveError::Field { t, source })?;
        values.extend(derivatives.iter().zip(&f).map(|(d, f)| d[j] - f));
    }
    Ok(Trajectory::new(grid, dim, values)?)
}
