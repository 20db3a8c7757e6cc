use std::sync::Arc;

use thiserror::Error;

/// Evaluation failure reported by a vector field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct FieldError(pub String);

/// Right-hand side `f(x, t)` of a system with `dim` states.
///
/// Implementations must be reentrant: solvers and checkers may evaluate the
/// same field from several threads.
pub trait VectorField: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes `f(x, t)` into `out` (`x.len() == out.len() == dim`).
    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError>;

    fn eval_vec(&self, x: &[f64], t: f64) -> Result<Vec<f64>, FieldError> {
        let mut out = vec![0.0; self.dim()];
        self.eval(x, t, &mut out)?;
        Ok(out)
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        (**self).eval(x, t, out)
    }
}

impl<T: VectorField + ?Sized> VectorField for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        (**self).eval(x, t, out)
    }
}

impl<T: VectorField + ?Sized> VectorField for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        (**self).eval(x, t, out)
    }
}

/// A field backed by a closure `(x, t, out)`.
#[derive(Clone)]
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64], f64, &mut [f64]) + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(&[f64], f64, &mut [f64]) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        (self.f)(x, t, out);
        Ok(())
    }
}

impl<F> std::fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnField").field("dim", &self.dim).finish_non_exhaustive()
    }
}
