//! Expression language for frame coefficients and test functions:
//! integers, coordinates, `+ - * /`, integer powers `^`, `sin`, `cos` and
//! parentheses. Division is only by constant subexpressions.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Jet, JetError, JetSpace, Num};
use crate::exactnum::{fmt_scalar, int, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    pub fn constant(c: Scalar) -> Expr {
        Expr::Const(c)
    }

    /// Value of a variable-free expression.
    fn const_value(&self) -> Option<Scalar> {
        Some(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(_) | Expr::Sin(_) | Expr::Cos(_) => return None,
            Expr::Add(a, b) => a.const_value()? + b.const_value()?,
            Expr::Sub(a, b) => a.const_value()? - b.const_value()?,
            Expr::Mul(a, b) => a.const_value()? * b.const_value()?,
            Expr::Neg(a) => -a.const_value()?,
            Expr::Pow(a, k) => num_traits::pow(a.const_value()?, *k as usize),
        })
    }

    pub fn uses_trig(&self) -> bool {
        match self {
            Expr::Sin(_) | Expr::Cos(_) => true,
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.uses_trig() || b.uses_trig(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_trig(),
        }
    }

    pub fn jet<T: Num>(&self, space: &Arc<JetSpace>, point: &[T]) -> Result<Jet<T>, JetError> {
        Ok(match self {
            Expr::Const(c) => Jet::constant(space, T::from_scalar(c)),
            Expr::Var(i) => Jet::variable(space, *i, point[*i].clone()),
            Expr::Add(a, b) => a.jet(space, point)? + b.jet(space, point)?,
            Expr::Sub(a, b) => a.jet(space, point)? - b.jet(space, point)?,
            Expr::Mul(a, b) => a.jet(space, point)? * b.jet(space, point)?,
            Expr::Neg(a) => -a.jet(space, point)?,
            Expr::Pow(a, k) => {
                let base = a.jet(space, point)?;
                let mut acc = Jet::constant(space, T::one());
                for _ in 0..*k {
                    acc = acc * base.clone();
                }
                acc
            }
            Expr::Sin(a) => a.jet(space, point)?.sin_cos()?.0,
            Expr::Cos(a) => a.jet(space, point)?.sin_cos()?.1,
        })
    }

    /// Plain floating-point evaluation, independent of the jet machinery.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => crate::exactnum::to_f64(c),
            Expr::Var(i) => point[*i],
            Expr::Add(a, b) => a.eval_f64(point) + b.eval_f64(point),
            Expr::Sub(a, b) => a.eval_f64(point) - b.eval_f64(point),
            Expr::Mul(a, b) => a.eval_f64(point) * b.eval_f64(point),
            Expr::Neg(a) => -a.eval_f64(point),
            Expr::Pow(a, k) => a.eval_f64(point).powi(*k as i32),
            Expr::Sin(a) => a.eval_f64(point).sin(),
            Expr::Cos(a) => a.eval_f64(point).cos(),
        }
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { e: self, vars }
    }
}

pub struct ExprDisplay<'a> {
    e: &'a Expr,
    vars: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars;
        let sub = |e: &'_ Expr| -> String { ExprDisplay { e, vars }.to_string() };
        match self.e {
            Expr::Const(c) => write!(f, "({})", fmt_scalar(c)),
            Expr::Var(i) => write!(f, "{}", self.vars[*i]),
            Expr::Add(a, b) => write!(f, "({} + {})", sub(a), sub(b)),
            Expr::Sub(a, b) => write!(f, "({} - {})", sub(a), sub(b)),
            Expr::Mul(a, b) => write!(f, "{}*{}", sub(a), sub(b)),
            Expr::Neg(a) => write!(f, "-{}", sub(a)),
            Expr::Pow(a, k) => write!(f, "{}^{k}", sub(a)),
            Expr::Sin(a) => write!(f, "sin({})", sub(a)),
            Expr::Cos(a) => write!(f, "cos({})", sub(a)),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, JetError> {
        Err(JetError::Parse { col: self.pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, JetError> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, JetError> {
        let mut lhs = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            self.peek();
            let at = self.pos;
            let rhs = self.unary()?;
            lhs = if op == b'*' {
                Expr::Mul(lhs.into(), rhs.into())
            } else {
                match rhs.const_value() {
                    Some(c) if !c.is_zero() => Expr::Mul(lhs.into(), Expr::Const(c.recip()).into()),
                    Some(_) => {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                    None => {
                        self.pos = at;
                        return self.err("division only by constants");
                    }
                }
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, JetError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let Ok(k) = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("").parse::<u32>() else {
                self.pos = start;
                return self.err("expected a non-negative integer exponent");
            };
            return Ok(Expr::Pow(base.into(), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, JetError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
                match text.parse::<i64>() {
                    Ok(v) => Ok(Expr::Const(int(v))),
                    Err(_) => {
                        self.pos = start;
                        self.err("integer literal out of range")
                    }
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii identifier").to_string();
                if self.peek() == Some(b'(') {
                    let wrap: fn(Box<Expr>) -> Expr = match name.as_str() {
                        "sin" => Expr::Sin,
                        "cos" => Expr::Cos,
                        _ => return Err(JetError::UnsupportedAtom(name)),
                    };
                    self.pos += 1;
                    let e = self.expr()?;
                    if self.peek() != Some(b')') {
                        return self.err("expected `)`");
                    }
                    self.pos += 1;
                    return Ok(wrap(e.into()));
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => Err(JetError::UnknownVariable(name)),
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `text` over the coordinate names `vars`.
pub fn parse_expr(text: &str, vars: &[String]) -> Result<Expr, JetError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::Const(int(v))
    }
}

impl Expr {
    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }
}
