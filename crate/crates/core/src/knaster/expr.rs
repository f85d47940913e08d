//! Tiny arithmetic expressions over `x1..xn`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' integer)?
//! base   := number | 'x' integer | '(' expr ')' | ('sin' | 'cos') '(' expr ')'
//! ```
//!
//! There is no unary minus. [`Expr`]'s `Display` is the canonical form and
//! parses back to the same tree.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Zero-based coordinate index (`x1` is `Var(0)`).
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => x[*i],
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
        }
    }

    /// Value and gradient with respect to all of `x` (forward mode).
    pub fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = x.len();
        match self {
            Expr::Num(v) => (*v, vec![0.0; n]),
            Expr::Var(i) => {
                let mut g = vec![0.0; n];
                g[*i] = 1.0;
                (x[*i], g)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                let s = if matches!(self, Expr::Add(..)) {
                    1.0
                } else {
                    -1.0
                };
                (
                    va + s * vb,
                    ga.iter().zip(&gb).map(|(p, q)| p + s * q).collect(),
                )
            }
            Expr::Mul(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                (
                    va * vb,
                    ga.iter().zip(&gb).map(|(p, q)| p * vb + va * q).collect(),
                )
            }
            Expr::Div(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                let v = va / vb;
                (
                    v,
                    ga.iter().zip(&gb).map(|(p, q)| (p - v * q) / vb).collect(),
                )
            }
            Expr::Pow(a, k) => {
                let (va, ga) = a.eval_grad(x);
                let d = if *k == 0 {
                    0.0
                } else {
                    *k as f64 * va.powi(*k as i32 - 1)
                };
                (va.powi(*k as i32), ga.iter().map(|p| d * p).collect())
            }
            Expr::Sin(a) => {
                let (va, ga) = a.eval_grad(x);
                let c = va.cos();
                (va.sin(), ga.iter().map(|p| c * p).collect())
            }
            Expr::Cos(a) => {
                let (va, ga) = a.eval_grad(x);
                let s = -va.sin();
                (va.cos(), ga.iter().map(|p| s * p).collect())
            }
        }
    }

    /// Number of coordinates the expression needs (highest `x` index).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.arity().max(b.arity())
            }
            Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) => a.arity(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) | Expr::Div(..) => 1,
            Expr::Pow(..) => 2,
            _ => 3,
        }
    }
}

struct Wrap<'a>(&'a Expr, bool);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Add(a, b) => write!(f, "{} + {}", a, Wrap(b, b.precedence() == 0)),
            Expr::Sub(a, b) => write!(f, "{} - {}", a, Wrap(b, b.precedence() == 0)),
            Expr::Mul(a, b) => write!(
                f,
                "{} * {}",
                Wrap(a, a.precedence() < 1),
                Wrap(b, b.precedence() <= 1)
            ),
            Expr::Div(a, b) => write!(
                f,
                "{} / {}",
                Wrap(a, a.precedence() < 1),
                Wrap(b, b.precedence() <= 1)
            ),
            Expr::Pow(a, k) => write!(f, "{}^{k}", Wrap(a, a.precedence() < 3)),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if c == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "integer out of range".into(),
            })
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos > s
        };
        let int = digits(self);
        let mut frac = false;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = digits(self);
        }
        if !int && !frac {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = mark;
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map(Expr::Num).map_err(|_| Error::Syntax {
            position: start,
            message: format!("malformed number `{text}`"),
        })
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "sin" | "cos" => {
                        self.expect(b'(')?;
                        let arg = Box::new(self.expr()?);
                        self.expect(b')')?;
                        Ok(if name == "sin" {
                            Expr::Sin(arg)
                        } else {
                            Expr::Cos(arg)
                        })
                    }
                    _ => {
                        let index = name
                            .strip_prefix('x')
                            .filter(|d| {
                                !d.is_empty()
                                    && d.bytes().all(|b| b.is_ascii_digit())
                                    && !d.starts_with('0')
                            })
                            .and_then(|d| d.parse::<usize>().ok());
                        match index {
                            Some(i) => Ok(Expr::Var(i - 1)),
                            None => Err(Error::UnknownIdentifier {
                                name: name.to_string(),
                                position: start,
                            }),
                        }
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse_expr("1 - 2 - 3").unwrap().eval(&[]), -4.0);
        assert_eq!(parse_expr("8 / 4 / 2").unwrap().eval(&[]), 1.0);
        assert_eq!(parse_expr("2 + 3 * 4^2").unwrap().eval(&[]), 50.0);
        assert_eq!(parse_expr("(2 + 3) * 4").unwrap().eval(&[]), 20.0);
        assert_eq!(parse_expr("1.5e1 + .5").unwrap().eval(&[]), 15.5);
    }

    #[test]
    fn variables_and_functions() {
        let e = parse_expr("x1^2 - x2^2").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(e.eval(&[h, h, 0.0]).abs() < 1e-16);
        assert_eq!(e.arity(), 2);
        let e = parse_expr("sin(x1)*x3").unwrap();
        assert_eq!(e.eval(&[0.0, 0.7, 0.2]), 0.0);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_expr("x1 +"),
            Err(Error::Syntax { position: 4, .. })
        ));
        assert!(matches!(
            parse_expr("x0"),
            Err(Error::UnknownIdentifier { position: 0, .. })
        ));
        assert!(matches!(
            parse_expr("2 * y"),
            Err(Error::UnknownIdentifier { position: 4, .. })
        ));
        assert!(matches!(
            parse_expr("-x1"),
            Err(Error::Syntax { position: 0, .. })
        ));
        assert!(matches!(parse_expr("(x1"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_expr("x1 x2"),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(parse_expr("x1^2^3"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_round_trip() {
        for text in [
            "x1 - (x2 - x3)",
            "x1 / (x2 * x3)",
            "(x1 + 1)^3 * cos(x2 / 7)",
            "(x1^2)^3",
            "2.5 * sin(x1 - x2)^2",
            "1e-7 + x2",
        ] {
            let e = parse_expr(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{text} -> {printed}");
        }
        assert_eq!(
            parse_expr("x1-(x2-x3)").unwrap().to_string(),
            "x1 - (x2 - x3)"
        );
    }

    #[test]
    fn gradients_match_differences() {
        let e = parse_expr("sin(x1 * x2) / (x3^2 + 1) - cos(x2)^3").unwrap();
        let x = [0.3, -0.8, 1.1];
        let (v, g) = e.eval_grad(&x);
        assert_eq!(v, e.eval(&x));
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += 1e-6;
            xm[i] -= 1e-6;
            let fd = (e.eval(&xp) - e.eval(&xm)) / 2e-6;
            assert!((fd - g[i]).abs() < 1e-8);
        }
    }
}
