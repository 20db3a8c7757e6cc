use std::fmt;

use super::error::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => PREC_SUM,
            BinOp::Mul | BinOp::Div => PREC_PRODUCT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Abs => v.abs(),
        }
    }
}

/// Expression tree. Exponents are always numeric literals.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// State component `x_i`, 1-based.
    Var(usize),
    Time,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

/// Largest integer exponent evaluated by repeated multiplication.
const MAX_REPEATED_POWER: f64 = 16.0;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Num(v) if v.is_sign_negative() => PREC_UNARY,
            Expr::Num(_) | Expr::Var(_) | Expr::Time | Expr::Call(..) => PREC_ATOM,
            Expr::Neg(_) => PREC_UNARY,
            Expr::Binary(op, ..) => op.prec(),
            Expr::Pow(..) => PREC_POWER,
        }
    }

    /// Highest state index referenced (0 when no `x_i` appears).
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Time => 0,
            Expr::Var(i) => *i,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => e.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Evaluates at state `x` and time `t`.
    ///
    /// Integer exponents up to 16 in magnitude use repeated multiplication, so
    /// results do not depend on the platform `pow`.
    pub fn eval(&self, x: &[f64], t: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Time => t,
            Expr::Var(i) => match x.get(i - 1) {
                Some(v) => *v,
                None => {
                    return Err(EvalError::MissingState {
                        expr: self.to_string(),
                        needed: *i,
                        got: x.len(),
                    })
                }
            },
            Expr::Neg(e) => -e.eval(x, t)?,
            Expr::Binary(op, a, b) => {
                let a = a.eval(x, t)?;
                let b = b.eval(x, t)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero(self.to_string()));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(base, p) => {
                let b = base.eval(x, t)?;
                if p.fract() == 0.0 && p.abs() <= MAX_REPEATED_POWER {
                    let n = p.abs() as u32;
                    let mut acc = 1.0;
                    for _ in 0..n {
                        acc *= b;
                    }
                    if *p < 0.0 {
                        if acc == 0.0 {
                            return Err(EvalError::DivisionByZero(self.to_string()));
                        }
                        acc = 1.0 / acc;
                    }
                    acc
                } else {
                    b.powf(*p)
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(x, t)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite(self.to_string()))
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Shortest text that parses back to the same `f64`.
pub(crate) fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Minimal-parenthesis rendering: printing, parsing and printing again gives
/// the same text.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => f.write_str(&format_number(*v)),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Time => f.write_str("t"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_child(f, e.prec() < PREC_UNARY)
            }
            Expr::Binary(op, a, b) => {
                let p = op.prec();
                a.write_child(f, a.prec() < p)?;
                write!(f, " {} ", op.symbol())?;
                b.write_child(f, b.prec() <= p)
            }
            Expr::Pow(base, p) => {
                base.write_child(f, base.prec() < PREC_ATOM)?;
                write!(f, "^{}", format_number(*p))
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(i: usize) -> Box<Expr> {
        Box::new(Expr::Var(i))
    }

    #[test]
    fn printing_keeps_structure() {
        let e = Expr::Binary(
            BinOp::Sub,
            var(1),
            Box::new(Expr::Binary(BinOp::Sub, var(2), var(3))),
        );
        assert_eq!(e.to_string(), "x1 - (x2 - x3)");
        let e = Expr::Pow(Box::new(Expr::Neg(var(1))), 2.0);
        assert_eq!(e.to_string(), "(-x1)^2");
        let e = Expr::Neg(Box::new(Expr::Pow(var(1), 2.0)));
        assert_eq!(e.to_string(), "-x1^2");
        let e = Expr::Pow(Box::new(Expr::Num(-2.0)), 2.0);
        assert_eq!(e.to_string(), "(-2)^2");
        assert_eq!(Expr::Pow(var(2), -0.5).to_string(), "x2^-0.5");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, 0.1, 1e-20, 6.02e23, 123456.789, 1e300, 5e-324] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_number(1e-20), "1e-20");
        assert_eq!(format_number(0.5), "0.5");
    }

    #[test]
    fn evaluation_errors_name_subexpression() {
        let div = Expr::Binary(
            BinOp::Add,
            Box::new(Expr::Num(1.0)),
            Box::new(Expr::Binary(BinOp::Div, var(1), Box::new(Expr::Time))),
        );
        assert_eq!(div.eval(&[1.0], 0.0), Err(EvalError::DivisionByZero("x1 / t".into())));
        let big = Expr::Call(Func::Exp, var(1));
        assert_eq!(big.eval(&[1e3], 0.0), Err(EvalError::NonFinite("exp(x1)".into())));
        assert_eq!(Expr::Pow(var(1), -2.0).eval(&[0.0], 0.0), Err(EvalError::DivisionByZero("x1^-2".into())));
        assert!(matches!(Expr::Var(3).eval(&[1.0], 0.0), Err(EvalError::MissingState { needed: 3, .. })));
    }

    #[test]
    fn integer_powers_multiply() {
        let p = Expr::Pow(var(1), 3.0);
        assert_eq!(p.eval(&[1.1], 0.0).unwrap(), 1.1 * 1.1 * 1.1);
        assert_eq!(Expr::Pow(var(1), 0.5).eval(&[4.0], 0.0).unwrap(), 2.0);
        assert_eq!(Expr::Pow(var(1), -2.0).eval(&[2.0], 0.0).unwrap(), 0.25);
    }
}
