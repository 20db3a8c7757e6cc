use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AnalysisError;

/// Axis-aligned box `[lower_i, upper_i]` containing the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SampleBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, AnalysisError> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(AnalysisError::InvalidBox("bounds must have equal, nonzero length".into()));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && *lo <= 0.0 && 0.0 <= *hi && lo < hi) {
                return Err(AnalysisError::InvalidBox(format!(
                    "axis {} = [{lo}, {hi}] must be bounded and contain 0",
                    i + 1
                )));
            }
        }
        Ok(SampleBox { lower, upper })
    }

    /// `[-r, r]^dim`.
    pub fn symmetric(dim: usize, radius: f64) -> Result<Self, AnalysisError> {
        SampleBox::new(vec![-radius; dim], vec![radius; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }
}

/// Deterministic sample set: a uniform lattice with `lattice_per_axis` points
/// per axis, followed by `random_points` seeded uniform draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePlan {
    pub lattice_per_axis: usize,
    pub random_points: usize,
    pub seed: u64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan { lattice_per_axis: 11, random_points: 1000, seed: 20_200_914 }
    }
}

impl SamplePlan {
    pub fn with_seed(seed: u64) -> Self {
        SamplePlan { seed, ..SamplePlan::default() }
    }

    /// Sample points in a fixed order (lattice in lexicographic order, then
    /// the random draws).
    pub fn points(&self, region: &SampleBox) -> Vec<Vec<f64>> {
        let dim = region.dim();
        let per_axis = self.lattice_per_axis.max(1);
        let axis_value = |axis: usize, k: usize| {
            if per_axis == 1 {
                0.5 * (region.lower[axis] + region.upper[axis])
            } else {
                let frac = k as f64 / (per_axis - 1) as f64;
                region.lower[axis] + frac * (region.upper[axis] - region.lower[axis])
            }
        };
        let lattice_len = per_axis.checked_pow(dim as u32).unwrap_or(usize::MAX);
        let mut points = Vec::with_capacity(lattice_len.saturating_add(self.random_points).min(1 << 24));
        let mut idx = vec![0usize; dim];
        'lattice: loop {
            points.push((0..dim).map(|a| axis_value(a, idx[a])).collect());
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < per_axis {
                    continue 'lattice;
                }
                idx[a] = 0;
            }
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_points {
            points.push(
                (0..dim).map(|a| rng.gen_range(region.lower[a]..=region.upper[a])).collect(),
            );
        }
        points
    }
}
