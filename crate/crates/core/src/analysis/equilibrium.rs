use super::AnalysisError;
use crate::solver::{FieldError, VectorField};

/// Tolerance on `|f(x*, t)|` for accepting an equilibrium.
const EQUILIBRIUM_TOL: f64 = 1e-10;

/// `g(y, t) = f(y + offset, t)`.
#[derive(Debug, Clone)]
pub struct ShiftedField<F> {
    inner: F,
    offset: Vec<f64>,
}

impl<F: VectorField> ShiftedField<F> {
    /// Shifts without checking that `offset` is an equilibrium.
    pub fn new(inner: F, offset: Vec<f64>) -> Result<Self, AnalysisError> {
        if offset.len() != inner.dim() {
            return Err(AnalysisError::DimensionMismatch { expected: inner.dim(), got: offset.len() });
        }
        Ok(ShiftedField { inner, offset })
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: VectorField> VectorField for ShiftedField<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        let moved: Vec<f64> = x.iter().zip(&self.offset).map(|(a, b)| a + b).collect();
        self.inner.eval(&moved, t, out)
    }
}

/// Moves the equilibrium `x_star` to the origin after checking
/// `|f(x_star, t)|_inf <= 1e-10` at every time in `times`.
pub fn shift_equilibrium<F: VectorField>(
    field: F,
    x_star: Vec<f64>,
    times: &[f64],
) -> Result<ShiftedField<F>, AnalysisError> {
    if x_star.len() != field.dim() {
        return Err(AnalysisError::DimensionMismatch { expected: field.dim(), got: x_star.len() });
    }
    let mut out = vec![0.0; field.dim()];
    for &t in times {
        field.eval(&x_star, t, &mut out)?;
        let residual = out.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !(residual <= EQUILIBRIUM_TOL) {
            return Err(AnalysisError::NotAnEquilibrium { t, residual });
        }
    }
    ShiftedField::new(field, x_star)
}
