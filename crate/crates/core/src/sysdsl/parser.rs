use super::ast::{BinOp, Expr, Func};
use super::error::{ErrorKind, ParseError, Pos};
use super::lexer::{tokenize, Tok, Token};

const MAX_DEPTH: usize = 200;

/// Parses one expression over `x1..x{dim}` and `t`.
pub fn parse_expr(src: &str, dim: usize) -> Result<Expr, ParseError> {
    parse_expr_at(src, dim, Pos::START)
}

/// As [`parse_expr`], reporting positions relative to `origin`.
pub(crate) fn parse_expr_at(src: &str, dim: usize, origin: Pos) -> Result<Expr, ParseError> {
    let tokens = tokenize(src, origin)?;
    let mut p = Parser { tokens, at: 0, dim, depth: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        _ => Err(p.unexpected(&["operator", "end of input"])),
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    dim: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let mut err = ParseError::new(
            ErrorKind::Syntax,
            self.pos(),
            &format!("unexpected {}", self.peek().describe()),
        );
        err.expected = expected.iter().map(|s| s.to_string()).collect();
        err
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(
                ErrorKind::Syntax,
                self.pos(),
                &format!("expression nests deeper than {MAX_DEPTH} levels"),
            ));
        }
        Ok(())
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.enter()?;
            self.bump();
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    // power := primary ('^' exponent)?
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let p = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    // exponent := '-'? NUMBER ('^' exponent)?, folded right to left
    fn exponent(&mut self) -> Result<f64, ParseError> {
        self.enter()?;
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let start = self.pos();
        let mut value = match self.peek() {
            Tok::Num(v) => *v,
            _ => return Err(self.unexpected(&["numeric literal exponent"])),
        };
        self.bump();
        if *self.peek() == Tok::Caret {
            self.bump();
            value = value.powf(self.exponent()?);
        }
        if negative {
            value = -value;
        }
        if !value.is_finite() {
            return Err(ParseError::new(ErrorKind::Lexical, start, "exponent overflows"));
        }
        self.depth -= 1;
        Ok(value)
    }

    // primary := NUMBER | 't' | 'x'INDEX | FUNC '(' expr ')' | '(' expr ')'
    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "t" {
                    return Ok(Expr::Time);
                }
                if let Some(func) = Func::from_name(&name) {
                    return self.call(func, pos);
                }
                if let Some(index) = variable_index(&name) {
                    if index == 0 || index > self.dim {
                        return Err(ParseError::new(
                            ErrorKind::VariableRange,
                            pos,
                            &format!("{name} is out of range for dimension {}", self.dim),
                        ));
                    }
                    return Ok(Expr::Var(index));
                }
                Err(ParseError::new(ErrorKind::Syntax, pos, &format!("unknown identifier '{name}'")))
            }
            _ => Err(self.unexpected(&["number", "variable", "function", "'('", "'-'"])),
        }
    }

    fn call(&mut self, func: Func, pos: Pos) -> Result<Expr, ParseError> {
        if *self.peek() != Tok::LParen {
            return Err(self.unexpected(&["'('"]));
        }
        self.bump();
        if *self.peek() == Tok::RParen {
            return Err(arity(func, 0, pos));
        }
        let arg = self.expr()?;
        if *self.peek() == Tok::Comma {
            let mut count = 1;
            while *self.peek() == Tok::Comma {
                self.bump();
                self.expr()?;
                count += 1;
            }
            return Err(arity(func, count, pos));
        }
        self.expect_close()?;
        Ok(Expr::Call(func, Box::new(arg)))
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["operator", "')'"]))
        }
    }
}

fn arity(func: Func, got: usize, pos: Pos) -> ParseError {
    ParseError::new(
        ErrorKind::Arity,
        pos,
        &format!("{} takes exactly one argument, got {got}", func.name()),
    )
}

/// `x<digits>` without a leading zero; `Some(0)` for indices that overflow.
fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    Some(digits.parse().unwrap_or(0))
}
