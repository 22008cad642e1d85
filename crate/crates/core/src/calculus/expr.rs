//! Scalar expressions over chart coordinates.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so `-x^2` is
//! `-(x^2)` and `2^-1` is `2^(-1)`. A minus sign directly in front of a bare
//! numeric literal folds into a negative constant.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::calculus::real::Real;
use crate::calculus::scalar::Scalar;
use crate::error::{Error, Result};

/// Elementary functions available in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

/// Expression AST. Coordinates are referenced by index into the chart.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(exponent))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    /// Highest coordinate index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.max_var().is_none()
    }

    /// Shifts every coordinate index by `offset`.
    pub fn shift_vars(&self, offset: usize) -> Expr {
        self.map_vars(&|i| i + offset)
    }

    pub fn map_vars(&self, f: &dyn Fn(usize) -> usize) -> Expr {
        let b = |e: &Expr| Box::new(e.map_vars(f));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(i) => Expr::Var(f(*i)),
            Expr::Neg(a) => Expr::Neg(b(a)),
            Expr::Call(func, a) => Expr::Call(*func, b(a)),
            Expr::Add(x, y) => Expr::Add(b(x), b(y)),
            Expr::Sub(x, y) => Expr::Sub(b(x), b(y)),
            Expr::Mul(x, y) => Expr::Mul(b(x), b(y)),
            Expr::Div(x, y) => Expr::Div(b(x), b(y)),
            Expr::Pow(x, y) => Expr::Pow(b(x), b(y)),
        }
    }

    /// Evaluates over reals or jets. `args[i]` is the value of coordinate `i`.
    pub fn eval<S: Scalar>(&self, args: &[S]) -> Result<S> {
        let template = args.first().ok_or(Error::Dimension {
            expected: self.max_var().map_or(1, |i| i + 1),
            got: 0,
        })?;
        self.eval_inner(args, template)
    }

    fn eval_inner<S: Scalar>(&self, args: &[S], template: &S) -> Result<S> {
        Ok(match self {
            Expr::Const(c) => template.constant_like(S::Real::lit(*c)),
            Expr::Var(i) => args
                .get(*i)
                .cloned()
                .ok_or(Error::Dimension {
                    expected: i + 1,
                    got: args.len(),
                })?,
            Expr::Neg(a) => -a.eval_inner(args, template)?,
            Expr::Add(a, b) => a.eval_inner(args, template)? + b.eval_inner(args, template)?,
            Expr::Sub(a, b) => a.eval_inner(args, template)? - b.eval_inner(args, template)?,
            Expr::Mul(a, b) => a.eval_inner(args, template)? * b.eval_inner(args, template)?,
            Expr::Div(a, b) => a
                .eval_inner(args, template)?
                .try_div(&b.eval_inner(args, template)?)?,
            Expr::Pow(base, exponent) => {
                let b = base.eval_inner(args, template)?;
                if exponent.is_constant() {
                    let e = exponent.eval_inner(&[0.0f64], &0.0f64)?;
                    if e.fract() == 0.0 && e.abs() <= 1024.0 {
                        b.try_powi(e as i32)?
                    } else {
                        b.try_powf(S::Real::lit(e))?
                    }
                } else {
                    let e = exponent.eval_inner(args, template)?;
                    (b.try_ln()? * e).exp_s()
                }
            }
            Expr::Call(func, a) => {
                let v = a.eval_inner(args, template)?;
                match func {
                    Func::Exp => v.exp_s(),
                    Func::Ln => v.try_ln()?,
                    Func::Sqrt => v.try_sqrt()?,
                    Func::Sin => v.sin_s(),
                    Func::Cos => v.cos_s(),
                }
            }
        })
    }

    /// Printable form using the given coordinate names.
    pub fn display<'a, N: AsRef<str>>(&'a self, names: &'a [N]) -> ExprDisplay<'a, N> {
        ExprDisplay { expr: self, names }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 => 0,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

pub struct ExprDisplay<'a, N> {
    expr: &'a Expr,
    names: &'a [N],
}

impl<N: AsRef<str>> ExprDisplay<'_, N> {
    fn write(&self, e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = e.precedence() < min_prec;
        if paren {
            write!(f, "(")?;
        }
        match e {
            Expr::Const(c) => write!(f, "{c:?}")?,
            Expr::Var(i) => match self.names.get(*i) {
                Some(n) => write!(f, "{}", n.as_ref())?,
                None => write!(f, "x{}", i + 1)?,
            },
            Expr::Neg(a) => {
                write!(f, "-")?;
                // keep `-(2.0)` from folding into a negative literal on reparse
                let inner = if matches!(**a, Expr::Const(_)) { 6 } else { 3 };
                self.write(a, inner, f)?;
            }
            Expr::Add(a, b) => self.binary(a, " + ", b, 1, 2, f)?,
            Expr::Sub(a, b) => self.binary(a, " - ", b, 1, 2, f)?,
            Expr::Mul(a, b) => self.binary(a, " * ", b, 2, 3, f)?,
            Expr::Div(a, b) => self.binary(a, " / ", b, 2, 3, f)?,
            Expr::Pow(a, b) => self.binary(a, "^", b, 5, 3, f)?,
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.write(a, 0, f)?;
                write!(f, ")")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }

    fn binary(
        &self,
        a: &Expr,
        op: &str,
        b: &Expr,
        left: u8,
        right: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        self.write(a, left, f)?;
        write!(f, "{op}")?;
        self.write(b, right, f)
    }
}

impl<N: AsRef<str>> fmt::Display for ExprDisplay<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.expr, 0, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && i + 1 < bytes.len() && (bytes[i + 1] as char).is_ascii_digit()) {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s = &text[start..i];
            let v: f64 = s.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("malformed number `{s}`"),
            })?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push((tok, start));
            i += c.len_utf8();
        }
    }
    Ok(out)
}

struct Parser<'a, N> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    coordinates: &'a [N],
    constants: &'a BTreeMap<String, f64>,
}

impl<N: AsRef<str>> Parser<'_, N> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { lhs + rhs } else { lhs - rhs };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' { lhs * rhs } else { lhs / rhs };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            if let (Some(Tok::Num(v)), next) = (self.peek().cloned(), self.peek_at(1)) {
                if next != Some(&Tok::Op('^')) {
                    self.pos += 1;
                    return Ok(Expr::Const(-v));
                }
            }
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.coordinates.iter().position(|c| c.as_ref() == name) {
                    return Ok(Expr::Var(i));
                }
                if let Some(&c) = self.constants.get(&name) {
                    return Ok(Expr::Const(c));
                }
                if let Some(func) = Func::from_name(&name) {
                    if self.peek() != Some(&Tok::LParen) {
                        return self.syntax(format!("`{name}` must be applied to an argument"));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::call(func, arg));
                }
                if name == "pi" {
                    return Ok(Expr::Const(std::f64::consts::PI));
                }
                Err(Error::UnknownIdentifier { name, pos })
            }
            Some(Tok::Op(c)) => self.syntax(format!("unexpected operator `{c}`")),
            Some(Tok::RParen) => self.syntax("unexpected `)`"),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax("expected `)`")
        }
    }
}

/// Parses `text` with the given coordinate names and bound constants.
pub fn parse<N: AsRef<str>>(
    text: &str,
    coordinates: &[N],
    constants: &BTreeMap<String, f64>,
) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        coordinates,
        constants,
    };
    let e = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.syntax("trailing input");
    }
    Ok(e)
}

/// Parses with no bound constants.
pub fn parse_coords<N: AsRef<str>>(text: &str, coordinates: &[N]) -> Result<Expr> {
    parse(text, coordinates, &BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::jet::Jet;
    use crate::calculus::multi_index::MultiIndex;
    use approx::assert_relative_eq;

    fn p(s: &str, names: &[&str]) -> Expr {
        parse_coords(s, names).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let e = p("x1^2 + x2", &["x1", "x2"]);
        assert_eq!(e, Expr::Var(0).pow(Expr::Const(2.0)) + Expr::Var(1));
        assert_eq!(p("-x^2", &["x"]), -(Expr::Var(0).pow(Expr::Const(2.0))));
        assert_eq!(
            p("2^3^2", &[] as &[&str]),
            Expr::Const(2.0).pow(Expr::Const(3.0).pow(Expr::Const(2.0)))
        );
        assert_eq!(p("a - b - c", &["a", "b", "c"]), (Expr::Var(0) - Expr::Var(1)) - Expr::Var(2));
        assert_eq!(p("2^-1", &[] as &[&str]), Expr::Const(2.0).pow(Expr::Const(-1.0)));
    }

    #[test]
    fn functions_and_constants() {
        let e = p("sqrt(t^4 - 1)", &["t"]);
        assert_relative_eq!(e.eval(&[2.0f64]).unwrap(), 15f64.sqrt());
        let mut consts = BTreeMap::new();
        consts.insert("a".to_string(), 1.0);
        consts.insert("b".to_string(), 0.0);
        consts.insert("c".to_string(), 1.0);
        let e = parse("exp(a*x^2+b*x+c)", &["x"], &consts).unwrap();
        assert_relative_eq!(e.eval(&[0.0f64]).unwrap(), std::f64::consts::E);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_coords("x + y", &["x"]),
            Err(Error::UnknownIdentifier { pos: 4, .. })
        ));
        assert!(matches!(parse_coords("x + ", &["x"]), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_coords("(x", &["x"]), Err(Error::Syntax { .. })));
        assert!(matches!(parse_coords("x $ 2", &["x"]), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_coords("sqrt x", &["x"]), Err(Error::Syntax { .. })));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("x1+1", &["x1"]).eval(&[2.0f64]).unwrap(), 3.0);
        let t = Jet::variable(0, 2.0, 1, 2).unwrap();
        assert_eq!(p("t^4", &["t"]).eval(&[t]).unwrap().value(), 16.0);
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(matches!(
            p("ln(x)", &["x"]).eval(&[-1.0f64]),
            Err(Error::Domain { func: "ln", .. })
        ));
        assert!(matches!(
            p("sqrt(x)", &["x"]).eval(&[0.0f64]),
            Err(Error::Domain { func: "sqrt", .. })
        ));
        assert!(p("x^0.5", &["x"]).eval(&[-1.0f64]).is_err());
        // integer exponents accept any base
        assert_eq!(p("x^3", &["x"]).eval(&[-2.0f64]).unwrap(), -8.0);
        assert!(p("1/x", &["x"]).eval(&[0.0f64]).is_err());
    }

    #[test]
    fn variable_exponent() {
        let e = p("x^y", &["x", "y"]);
        let v = Jet::seed(&[2.0, 3.0], 2);
        let j = e.eval(&v).unwrap();
        assert_relative_eq!(j.value(), 8.0, epsilon = 1e-12);
        // ∂y x^y = x^y ln x
        assert_relative_eq!(j.d1(1).unwrap(), 8.0 * 2f64.ln(), epsilon = 1e-12);
        // ∂x∂y x^y = x^(y-1)(1 + y ln x)
        let mixed = j.partial(&MultiIndex::new(vec![1, 1])).unwrap();
        assert_relative_eq!(mixed, 4.0 * (1.0 + 3.0 * 2f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn print_reparses() {
        let names = ["x", "y"];
        for s in [
            "x^2 + y",
            "-x^2",
            "-(2.0)",
            "(x - y) - (x - y)",
            "x / (y * x)",
            "(-x)^2",
            "x^y^2",
            "exp(-x) * sin(y)^2 / sqrt(x + 1)",
            "(x^2)^3",
            "x * -y",
            "-(-x)",
        ] {
            let e = p(s, &names);
            let printed = e.display(&names).to_string();
            assert_eq!(p(&printed, &names), e, "{s} -> {printed}");
        }
    }
}
