//! Discrete fractional operators on uniformly sampled scalar signals.
//!
//! * Caputo derivative: L1 scheme, exact for piecewise-linear data.
//! * Riemann–Liouville integral: product trapezoid, with the kernel
//!   integrated analytically on every panel.
//! * Short-memory derivative: the L1 sum restricted to the panels inside
//!   `[s_omega(t_j), t_j]`.
//!
//! All operators return exactly zero at the first node.

use thiserror::Error;

use crate::grid::{GridError, Order, Trajectory, Window};
use crate::special::gamma_positive;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("node index {index} is outside the grid (last node {last})")]
    IndexOutOfRange { index: usize, last: usize },
    #[error("operator expects a scalar trajectory, got dimension {0}")]
    NotScalar(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// `1 / (omega^alpha Gamma(1 - alpha))`, the rate a Lyapunov decay must beat
/// for a short-memory system. Zero for an unbounded window.
pub fn memory_threshold(order: Order, win: Window) -> f64 {
    if win.is_unbounded() {
        return 0.0;
    }
    let alpha = order.alpha();
    1.0 / (win.omega().powf(alpha) * gamma_positive(1.0 - alpha))
}

/// L1 approximation of the Caputo derivative at node `at_index`.
pub fn caputo_l1(x: &Trajectory, order: Order, at_index: usize) -> Result<f64, OperatorError> {
    let values = scalar_values(x, at_index)?;
    let weights = l1_weights(order.alpha(), at_index);
    Ok(l1_scale(order.alpha(), x.grid().h()) * l1_sum(values, &weights, at_index, at_index))
}

/// L1 Caputo derivative at every node.
pub fn caputo_l1_all(x: &Trajectory, order: Order) -> Result<Vec<f64>, OperatorError> {
    windowed_l1_all(x, order, usize::MAX)
}

/// Short-memory derivative at node `at_index`: the L1 sum over the panels
/// inside the sliding window. Bit-identical to [`caputo_l1`] while
/// `t_j <= t0 + omega`.
pub fn short_memory_l1(
    x: &Trajectory,
    order: Order,
    win: Window,
    at_index: usize,
) -> Result<f64, OperatorError> {
    let window_steps = win.steps_on(x.grid())?;
    let values = scalar_values(x, at_index)?;
    let panels = at_index.min(window_steps);
    let weights = l1_weights(order.alpha(), panels);
    Ok(l1_scale(order.alpha(), x.grid().h()) * l1_sum(values, &weights, at_index, panels))
}

/// Short-memory derivative at every node.
pub fn short_memory_l1_all(
    x: &Trajectory,
    order: Order,
    win: Window,
) -> Result<Vec<f64>, OperatorError> {
    let window_steps = win.steps_on(x.grid())?;
    windowed_l1_all(x, order, window_steps)
}

/// Product-trapezoid approximation of the Riemann–Liouville integral at node
/// `at_index`.
pub fn rl_integral(x: &Trajectory, order: Order, at_index: usize) -> Result<f64, OperatorError> {
    let values = scalar_values(x, at_index)?;
    let table = PowerTable::new(order.alpha(), at_index);
    Ok(rl_scale(order.alpha(), x.grid().h()) * table.trapezoid_sum(at_index, |i| values[i]))
}

/// Riemann–Liouville integral at every node.
pub fn rl_integral_all(x: &Trajectory, order: Order) -> Result<Vec<f64>, OperatorError> {
    let values = scalar_values(x, 0)?;
    let n = x.grid().n_steps();
    let table = PowerTable::new(order.alpha(), n);
    let scale = rl_scale(order.alpha(), x.grid().h());
    Ok((0..=n).map(|j| scale * table.trapezoid_sum(j, |i| values[i])).collect())
}

fn scalar_values(x: &Trajectory, at_index: usize) -> Result<&[f64], OperatorError> {
    if x.dim() != 1 {
        return Err(OperatorError::NotScalar(x.dim()));
    }
    let last = x.grid().n_steps();
    if at_index > last {
        return Err(OperatorError::IndexOutOfRange { index: at_index, last });
    }
    Ok(x.as_flat())
}

fn windowed_l1_all(
    x: &Trajectory,
    order: Order,
    window_steps: usize,
) -> Result<Vec<f64>, OperatorError> {
    let values = scalar_values(x, 0)?;
    let n = x.grid().n_steps();
    let weights = l1_weights(order.alpha(), n.min(window_steps));
    let scale = l1_scale(order.alpha(), x.grid().h());
    Ok((0..=n).map(|j| scale * l1_sum(values, &weights, j, j.min(window_steps))).collect())
}

/// `h^(-alpha) / Gamma(2 - alpha)`
pub(crate) fn l1_scale(alpha: f64, h: f64) -> f64 {
    h.powf(-alpha) / gamma_positive(2.0 - alpha)
}

/// `h^alpha / Gamma(alpha + 2)`
pub(crate) fn rl_scale(alpha: f64, h: f64) -> f64 {
    h.powf(alpha) / gamma_positive(alpha + 2.0)
}

/// `w_k = (k+1)^(1-alpha) - k^(1-alpha)` for `k < count`.
pub(crate) fn l1_weights(alpha: f64, count: usize) -> Vec<f64> {
    let p = 1.0 - alpha;
    (0..count).map(|k| ((k + 1) as f64).powf(p) - (k as f64).powf(p)).collect()
}

/// `sum_{k < panels} w_k (x_{j-k} - x_{j-k-1})`, accumulated from the newest
/// panel backwards.
#[inline]
pub(crate) fn l1_sum(values: &[f64], weights: &[f64], j: usize, panels: usize) -> f64 {
    let mut acc = 0.0;
    for (k, w) in weights[..panels].iter().enumerate() {
        acc += w * (values[j - k] - values[j - k - 1]);
    }
    acc
}

/// Powers `m^alpha` and `m^(alpha+1)` for the product-trapezoid and
/// fractional Adams weights.
#[derive(Debug, Clone)]
pub(crate) struct PowerTable {
    alpha: f64,
    pow_a: Vec<f64>,
    pow_a1: Vec<f64>,
}

impl PowerTable {
    pub(crate) fn new(alpha: f64, max_m: usize) -> Self {
        let pow_a = (0..=max_m + 1).map(|m| (m as f64).powf(alpha)).collect();
        let pow_a1 = (0..=max_m + 1).map(|m| (m as f64).powf(alpha + 1.0)).collect();
        PowerTable { alpha, pow_a, pow_a1 }
    }

    /// Weight of the first node for an integral ending at node `j >= 1`:
    /// `(j-1)^(a+1) - (j-1-a) j^a`.
    #[inline]
    pub(crate) fn first(&self, j: usize) -> f64 {
        self.pow_a1[j - 1] - ((j - 1) as f64 - self.alpha) * self.pow_a[j]
    }

    /// Interior weight at lag `m = j - i >= 1`:
    /// `(m+1)^(a+1) - 2 m^(a+1) + (m-1)^(a+1)`.
    #[inline]
    pub(crate) fn interior(&self, m: usize) -> f64 {
        self.pow_a1[m + 1] - 2.0 * self.pow_a1[m] + self.pow_a1[m - 1]
    }

    /// Rectangle-rule weight at lag `m >= 1`: `m^a - (m-1)^a`.
    #[inline]
    pub(crate) fn rectangle(&self, m: usize) -> f64 {
        self.pow_a[m] - self.pow_a[m - 1]
    }

    /// `sum_{i=0}^{j} a_{i,j} y_i` with the last weight equal to one.
    pub(crate) fn trapezoid_sum(&self, j: usize, y: impl Fn(usize) -> f64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let mut acc = self.first(j) * y(0);
        for i in 1..j {
            acc += self.interior(j - i) * y(i);
        }
        acc + y(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;
    use crate::special::gamma;

    fn grid(h: f64, n: usize) -> UniformGrid {
        UniformGrid::new(0.0, h, n).unwrap()
    }

    #[test]
    fn constant_has_zero_derivative() {
        let x = Trajectory::sample(grid(0.1, 50), |_| 4.2).unwrap();
        let order = Order::new(0.37).unwrap();
        let win = Window::new(1.0, 0.0).unwrap();
        for j in 0..=50 {
            assert_eq!(caputo_l1(&x, order, j).unwrap(), 0.0);
            assert_eq!(short_memory_l1(&x, order, win, j).unwrap(), 0.0);
        }
    }

    #[test]
    fn caputo_of_linear_is_exact() {
        let order = Order::new(0.5).unwrap();
        let x = Trajectory::sample(grid(0.01, 100), |t| t).unwrap();
        let got = caputo_l1(&x, order, 100).unwrap();
        let want = 1.0 / gamma(1.5).unwrap();
        assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
        assert!((got - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-4);
    }

    #[test]
    fn caputo_of_square_converges() {
        let order = Order::new(0.95).unwrap();
        let h = 1e-3;
        let x = Trajectory::sample(grid(h, 1000), |t| t * t).unwrap();
        let got = caputo_l1(&x, order, 1000).unwrap();
        let want = 2.0 / gamma(3.0 - 0.95).unwrap();
        assert!((got - want).abs() <= h.powf(2.0 - 0.95), "{got} vs {want}");
    }

    #[test]
    fn rl_integral_examples() {
        let order = Order::new(0.5).unwrap();
        let zero = Trajectory::sample(grid(0.01, 100), |_| 0.0).unwrap();
        assert_eq!(rl_integral(&zero, order, 100).unwrap(), 0.0);

        for alpha in [0.2, 0.5, 0.9] {
            let order = Order::new(alpha).unwrap();
            let one = Trajectory::sample(grid(0.03, 70), |_| 1.0).unwrap();
            for j in [1, 2, 17, 70] {
                let t = one.grid().node(j);
                let want = t.powf(alpha) / gamma(alpha + 1.0).unwrap();
                let got = rl_integral(&one, order, j).unwrap();
                assert!((got - want).abs() <= 1e-12, "alpha {alpha} j {j}: {got} vs {want}");
            }
        }

        let x = Trajectory::sample(grid(0.01, 100), |t| t).unwrap();
        let got = rl_integral(&x, order, 100).unwrap();
        let want = 4.0 / (3.0 * std::f64::consts::PI.sqrt());
        assert!((got - want).abs() <= 1e-12);
        assert!((got - 0.75225).abs() < 1e-5);
    }

    #[test]
    fn short_memory_on_linear_matches_closed_form() {
        let order = Order::new(0.95).unwrap();
        let win = Window::new(5.0, 0.0).unwrap();
        let x = Trajectory::sample(grid(0.01, 2000), |t| t).unwrap();
        let want = 5f64.powf(0.05) / gamma(1.05).unwrap();
        for j in [501, 1000, 2000] {
            let got = short_memory_l1(&x, order, win, j).unwrap();
            assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
        }
        assert!((want - 1.1133).abs() < 1e-4);
    }

    #[test]
    fn short_memory_equals_caputo_inside_first_window() {
        let order = Order::new(0.7).unwrap();
        let win = Window::new(0.5, 0.0).unwrap();
        let x = Trajectory::sample(grid(0.01, 120), |t| (3.0 * t).sin() + t * t).unwrap();
        for j in 0..=50 {
            assert_eq!(
                short_memory_l1(&x, order, win, j).unwrap().to_bits(),
                caputo_l1(&x, order, j).unwrap().to_bits()
            );
        }
        assert_ne!(short_memory_l1(&x, order, win, 80).unwrap(), caputo_l1(&x, order, 80).unwrap());
        let all = short_memory_l1_all(&x, order, win).unwrap();
        for (j, v) in all.iter().enumerate() {
            assert_eq!(v.to_bits(), short_memory_l1(&x, order, win, j).unwrap().to_bits());
        }
    }

    #[test]
    fn single_node_and_errors() {
        let order = Order::new(0.5).unwrap();
        let x = Trajectory::scalar(grid(0.1, 0), vec![2.0]).unwrap();
        assert_eq!(caputo_l1(&x, order, 0).unwrap(), 0.0);
        assert_eq!(rl_integral(&x, order, 0).unwrap(), 0.0);
        assert!(matches!(
            caputo_l1(&x, order, 1),
            Err(OperatorError::IndexOutOfRange { index: 1, last: 0 })
        ));
        let v = Trajectory::new(grid(0.1, 1), 2, vec![0.0; 4]).unwrap();
        assert_eq!(rl_integral(&v, order, 0), Err(OperatorError::NotScalar(2)));
        let y = Trajectory::sample(grid(0.1, 10), |t| t).unwrap();
        let bad = Window::new(0.25, 0.0).unwrap();
        assert!(matches!(
            short_memory_l1(&y, order, bad, 3),
            Err(OperatorError::Grid(GridError::Misaligned { .. }))
        ));
    }

    #[test]
    fn threshold_values() {
        let t = memory_threshold(Order::new(0.95).unwrap(), Window::new(5.0, 0.0).unwrap());
        assert!((t - 0.011132959814077776822).abs() <= 1e-14);
        let t = memory_threshold(Order::new(0.5).unwrap(), Window::new(1.0, 0.0).unwrap());
        assert!((t - 0.56418958354775628695).abs() <= 1e-14);
        let order = Order::new(0.6).unwrap();
        let mut prev = f64::INFINITY;
        for omega in [0.1, 1.0, 5.0, 25.0, 1e3, 1e6] {
            let t = memory_threshold(order, Window::new(omega, 0.0).unwrap());
            assert!(t < prev);
            prev = t;
        }
        assert_eq!(memory_threshold(order, Window::unbounded(0.0)), 0.0);
    }
}
