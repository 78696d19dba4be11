//! A small expression language for test functions of one variable `t`.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          constant exponent, or constant base > 0
//! atom  := number | 't' | 'e' | 'pi' | fn '(' expr ')' | '(' expr ')'
//! fn    := exp | ln | log | sqrt
//! ```
//!
//! Derivatives are taken symbolically, so `f'` and `f''` of a parsed
//! expression are exact up to floating-point evaluation.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse expression at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Base raised to a constant power.
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

use Expr::*;

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Const(c) => *c,
            Var => t,
            Add(a, b) => a.eval(t) + b.eval(t),
            Sub(a, b) => a.eval(t) - b.eval(t),
            Mul(a, b) => a.eval(t) * b.eval(t),
            Div(a, b) => a.eval(t) / b.eval(t),
            Neg(a) => -a.eval(t),
            Pow(a, n) => {
                let base = a.eval(t);
                if n.fract() == 0.0 && n.abs() < 64.0 {
                    base.powi(*n as i32)
                } else {
                    base.powf(*n)
                }
            }
            Exp(a) => a.eval(t).exp(),
            Ln(a) => a.eval(t).ln(),
        }
    }

    fn is_const(&self) -> Option<f64> {
        match self {
            Const(c) => Some(*c),
            _ => None,
        }
    }

    fn depends_on_var(&self) -> bool {
        match self {
            Const(_) => false,
            Var => true,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.depends_on_var() || b.depends_on_var(),
            Neg(a) | Pow(a, _) | Exp(a) | Ln(a) => a.depends_on_var(),
        }
    }

    /// Symbolic derivative with respect to `t`, lightly simplified.
    pub fn derivative(&self) -> Expr {
        match self {
            Const(_) => Const(0.0),
            Var => Const(1.0),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow((**b).clone(), 2.0),
            ),
            Neg(a) => neg(a.derivative()),
            Pow(a, n) => mul(mul(Const(*n), pow((**a).clone(), n - 1.0)), a.derivative()),
            Exp(a) => mul(self.clone(), a.derivative()),
            Ln(a) => div(a.derivative(), (**a).clone()),
        }
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => Const(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => Const(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => Const(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Const(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => Const(x / y),
        (Some(0.0), _) => Const(0.0),
        (_, Some(1.0)) => a,
        _ => Div(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Const(x) => Const(-x),
        Neg(inner) => *inner,
        other => Neg(Box::new(other)),
    }
}

fn pow(a: Expr, n: f64) -> Expr {
    if n == 0.0 {
        Const(1.0)
    } else if n == 1.0 {
        a
    } else if let Some(c) = a.is_const() {
        Const(c.powf(n))
    } else {
        Pow(Box::new(a), n)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(c) => write!(f, "{c}"),
            Var => write!(f, "t"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "{a}*{b}"),
            Div(a, b) => write!(f, "{a}/({b})"),
            Neg(a) => write!(f, "-({a})"),
            Pow(a, n) => write!(f, "({a})^{n}"),
            Exp(a) => write!(f, "exp({a})"),
            Ln(a) => write!(f, "ln({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.pos;
            let exponent = self.unary()?;
            if !exponent.depends_on_var() {
                return Ok(Pow(Box::new(base), exponent.eval(0.0)));
            }
            // c^u(t) = exp(u(t) ln c) for a positive constant base.
            let c = base.eval(0.0);
            if base.depends_on_var() || !(c > 0.0) {
                return Err(ParseError {
                    pos: at,
                    msg: "a variable exponent needs a positive constant base".into(),
                });
            }
            if c == std::f64::consts::E {
                Ok(Exp(Box::new(exponent)))
            } else {
                Ok(Exp(Box::new(Mul(Box::new(Const(c.ln())), Box::new(exponent)))))
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(e);
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            let word = &self.src[start..self.pos];
            return match word {
                "t" => Ok(Var),
                "e" => Ok(Const(std::f64::consts::E)),
                "pi" => Ok(Const(std::f64::consts::PI)),
                "exp" | "ln" | "log" | "sqrt" => {
                    if !self.eat('(') {
                        return Err(self.error("expected '(' after function name"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    Ok(match word {
                        "exp" => Exp(Box::new(arg)),
                        "sqrt" => Pow(Box::new(arg), 0.5),
                        _ => Ln(Box::new(arg)),
                    })
                }
                _ => Err(ParseError {
                    pos: start,
                    msg: format!("unknown identifier '{word}'"),
                }),
            };
        }
        Err(self.error(&format!("unexpected character '{c}'")))
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        self.pos = end;
        self.src[start..end]
            .parse::<f64>()
            .map(Const)
            .map_err(|_| ParseError {
                pos: start,
                msg: format!("bad number '{}'", &self.src[start..end]),
            })
    }
}
