//! A small expression language for systems and Lyapunov candidates.
//!
//! Expressions use the variables `x1 .. xn` and `t`, real literals, the
//! operators `+ - * / ^` and the functions `sin`, `cos`, `exp`, `abs`:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := '-'? NUMBER ('^' exponent)?
//! primary  := NUMBER | 't' | 'x'INDEX | FUNC '(' expr ')' | '(' expr ')'
//! NUMBER   := DIGITS ('.' DIGITS?)? (('e' | 'E') ('+' | '-')? DIGITS)?
//! ```
//!
//! `^` binds tighter than unary minus, so `-2^2 = -4`, and is right
//! associative; its exponent must be a (possibly negated) literal, and
//! chained literal exponents are folded when parsing. There is no implicit
//! multiplication: `2x1` is a lexical error.
//!
//! [`parse_system`] reads the key/value document format built on top of
//! expressions.

mod ast;
mod document;
mod error;
mod field;
mod lexer;
mod parser;

pub use ast::{BinOp, Expr, Func};
pub use document::{parse_system, ParsedSystem};
pub use error::{ErrorKind, EvalError, ParseError, Pos};
pub use field::{ExprField, ExprScalar};
pub use parser::parse_expr;
