use super::ast::Expr;
use super::document::ParsedSystem;
use crate::analysis::ScalarField;
use crate::solver::{FieldError, VectorField};

/// Vector field `f_i(x, t)` given by one expression per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprField {
    components: Vec<Expr>,
}

impl ExprField {
    /// Fails when a component references a state beyond `components.len()`.
    pub fn new(components: Vec<Expr>) -> Result<Self, FieldError> {
        let dim = components.len();
        if dim == 0 {
            return Err(FieldError("a field needs at least one component".into()));
        }
        if let Some((i, e)) = components.iter().enumerate().find(|(_, e)| e.max_var() > dim) {
            return Err(FieldError(format!(
                "f{} = {e} references x{} but the system has dimension {dim}",
                i + 1,
                e.max_var()
            )));
        }
        Ok(ExprField { components })
    }

    pub fn from_system(sys: &ParsedSystem) -> Result<Self, FieldError> {
        ExprField::new(sys.components.clone())
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }
}

impl VectorField for ExprField {
    fn dim(&self) -> usize {
        self.components.len()
    }

    fn eval(&self, x: &[f64], t: f64, out: &mut [f64]) -> Result<(), FieldError> {
        for (i, (e, o)) in self.components.iter().zip(out.iter_mut()).enumerate() {
            *o = e.eval(x, t).map_err(|err| FieldError(format!("f{}: {err}", i + 1)))?;
        }
        Ok(())
    }
}

/// Scalar function `V(x, t)` given by an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprScalar(pub Expr);

impl ScalarField for ExprScalar {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64, FieldError> {
        self.0.eval(x, t).map_err(|err| FieldError(err.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysdsl::parse_expr;

    #[test]
    fn evaluates_components() {
        let f = ExprField::new(vec![parse_expr("-x1 - x2", 2).unwrap(), parse_expr("x2^3", 2).unwrap()])
            .unwrap();
        assert_eq!(f.eval_vec(&[3.0, -5.0], 0.0).unwrap(), vec![2.0, -125.0]);
    }

    #[test]
    fn rejects_out_of_range_components() {
        assert!(ExprField::new(vec![parse_expr("x2", 2).unwrap()]).is_err());
        assert!(ExprField::new(vec![]).is_err());
    }

    #[test]
    fn errors_name_the_component() {
        let f = ExprField::new(vec![parse_expr("1 / x1", 1).unwrap()]).unwrap();
        let err = f.eval_vec(&[0.0], 0.0).unwrap_err();
        assert_eq!(err.0, "f1: division by zero in `1 / x1`");
    }
}
