//! Text grammar for polynomials and E-polynomials.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := rat | var | 'exp' '(' xvar ')' | '(' expr ')'
//! rat    := int ('/' posint)?
//! var    := 'x' nat | 'u' nat
//! ```
//!
//! Indices are 1-based. Implicit multiplication is rejected.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::epoly::{expand_e, EPoly};
use crate::error::{Error, Result};
use crate::poly::{Poly, Rat, Var};

/// Largest accepted power exponent.
pub const MAX_EXPONENT: u32 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Rat(Rat),
    Var(Var),
    /// `exp(x_i)`, 0-based.
    Exp(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Largest 1-based variable index used.
    pub fn max_index(&self) -> usize {
        match self {
            Expr::Rat(_) => 0,
            Expr::Var(v) => v.index() + 1,
            Expr::Exp(i) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_index(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_index().max(b.max_index()),
        }
    }

    pub fn has_exp(&self) -> bool {
        match self {
            Expr::Rat(_) | Expr::Var(_) => false,
            Expr::Exp(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_exp(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_exp() || b.has_exp(),
        }
    }

    /// Expands with `exp(x_i)` read as `u_i`.
    pub fn to_poly(&self, ambient: usize) -> Poly {
        match self {
            Expr::Rat(c) => Poly::constant(ambient, c.clone()),
            Expr::Var(v) => Poly::var(ambient, *v),
            Expr::Exp(i) => Poly::var(ambient, Var::U(*i)),
            Expr::Neg(a) => -&a.to_poly(ambient),
            Expr::Add(a, b) => &a.to_poly(ambient) + &b.to_poly(ambient),
            Expr::Sub(a, b) => &a.to_poly(ambient) - &b.to_poly(ambient),
            Expr::Mul(a, b) => &a.to_poly(ambient) * &b.to_poly(ambient),
            Expr::Pow(a, k) => a.to_poly(ambient).pow(*k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(Error::parse(l0, c0, format!("unexpected character '{c}'"))),
            }
        };
        col += i - start;
        out.push(Token {
            tok,
            line: l0,
            col: c0,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(t.line, t.col, msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            self.err(&t, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let neg = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = Expr::Neg(Box::new(acc));
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        let Tok::Int(k) = &t.tok else {
            return self.err(&t, format!("expected exponent, found {}", describe(&t.tok)));
        };
        match k.to_u32().filter(|&k| k <= MAX_EXPONENT) {
            Some(k) => Ok(Expr::Pow(Box::new(base), k)),
            None => self.err(&t, format!("exponent overflow (maximum {MAX_EXPONENT})")),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => {
                if self.peek().tok != Tok::Slash {
                    return Ok(Expr::Rat(Rat::from_integer(n.clone())));
                }
                self.bump();
                let d = self.bump();
                match &d.tok {
                    Tok::Int(den) if !den.is_zero() => {
                        Ok(Expr::Rat(Rat::new(n.clone(), den.clone())))
                    }
                    Tok::Int(_) => self.err(&d, "zero denominator"),
                    other => self.err(&d, format!("expected denominator, found {}", describe(other))),
                }
            }
            Tok::Ident(name) if name == "exp" => {
                self.expect(Tok::LParen, "'(' after exp")?;
                let a = self.bump();
                let ok = match &a.tok {
                    Tok::Ident(s) => variable(s).filter(|v| matches!(v, Var::X(_))),
                    _ => None,
                };
                let Some(Var::X(i)) = ok else {
                    return self.err(&a, "exp argument must be a single x-variable");
                };
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.err(&a, "exp argument must be a single x-variable");
                }
                Ok(Expr::Exp(i))
            }
            Tok::Ident(name) => match variable(name) {
                Some(v) => Ok(Expr::Var(v)),
                None => self.err(&t, format!("unknown identifier '{name}'")),
            },
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            other => self.err(&t, format!("expected a term, found {}", describe(other))),
        }
    }
}

fn variable(name: &str) -> Option<Var> {
    let (kind, digits) = name.split_at(1);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let i: usize = digits.parse().ok()?;
    match kind {
        "x" => Some(Var::X(i - 1)),
        "u" => Some(Var::U(i - 1)),
        _ => None,
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses to a syntax tree.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, format!("unexpected {}", describe(&t.tok)));
    }
    Ok(e)
}

fn resolve_ambient(e: &Expr, ambient: Option<usize>) -> Result<usize> {
    let used = e.max_index();
    match ambient {
        Some(n) if n < used => Err(Error::InvalidArgument(format!(
            "ambient {n} is smaller than the largest variable index {used}"
        ))),
        Some(n) => Ok(n),
        None => Ok(used),
    }
}

/// Strict polynomial parse; `exp(...)` is rejected.
pub fn parse_poly(text: &str) -> Result<Poly> {
    parse_poly_in(text, None)
}

pub fn parse_poly_in(text: &str, ambient: Option<usize>) -> Result<Poly> {
    let e = parse_expr(text)?;
    if e.has_exp() {
        let col = text.find("exp").map_or(1, |i| text[..i].chars().count() + 1);
        let line = text[..text.find("exp").unwrap_or(0)].matches('\n').count() + 1;
        return Err(Error::parse(line, col, "exp() belongs to E-polynomial input"));
    }
    Ok(e.to_poly(resolve_ambient(&e, ambient)?))
}

/// Polynomial parse with `exp(x_i)` read as `u_i`.
pub fn parse_lifted(text: &str, ambient: Option<usize>) -> Result<Poly> {
    let e = parse_expr(text)?;
    Ok(e.to_poly(resolve_ambient(&e, ambient)?))
}

/// `expand_E` of [`parse_lifted`].
pub fn parse_epoly(text: &str) -> Result<EPoly> {
    parse_epoly_in(text, None)
}

pub fn parse_epoly_in(text: &str, ambient: Option<usize>) -> Result<EPoly> {
    Ok(expand_e(&parse_lifted(text, ambient)?))
}

/// Canonical text of a [`Poly`], [`EPoly`] or hyperplane.
pub fn pretty_print(value: &impl std::fmt::Display) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn corpus_polynomials() {
        let p = parse_poly("2*x1 - u1 + 1").unwrap();
        assert_eq!(p.ambient(), 1);
        assert_eq!(p.to_string(), "2*x1 - u1 + 1");
        let q = parse_poly("x1*u2 + x2*u1 - x1 - x2").unwrap();
        assert_eq!(q.ambient(), 2);
        let r = parse_poly("(x1 + u1 - 1)*((2*x1 - u1 + 1)^2 + x2^2) + (2*x1 - u1 + 1)^3").unwrap();
        assert_eq!(r.total_degree(), 3);
        assert_eq!(
            r.eval(&[rat(1), rat(2), rat(3), rat(0)]).unwrap(),
            rat(3) * rat(4) + rat(0)
        );
    }

    #[test]
    fn epoly_sugar() {
        let f = parse_epoly("2*x1 + 1 - exp(x1)").unwrap();
        assert_eq!(f.to_string(), "(2*x1 + 1) + (-1)*exp(x1)");
        assert_eq!(parse_epoly("exp(x1)*exp(x1)").unwrap().to_string(), "exp(x1)^2");
        assert_eq!(
            parse_epoly("x1*exp(x2) + x2*exp(x1) - x1 - x2").unwrap(),
            expand_e(&parse_poly("x1*u2 + x2*u1 - x1 - x2").unwrap())
        );
    }

    #[test]
    fn round_trip_printed_forms() {
        for s in ["(2*x1 + 1) + (-1)*exp(x1)", "(-x1 - x2) + (x1)*exp(x2) + (x2)*exp(x1)"] {
            let f = parse_epoly(s).unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!(parse_poly("0").unwrap().to_string(), "0");
    }

    #[test]
    fn rationals_and_signs() {
        let p = parse_poly("-3/6*x1 + 2/1").unwrap();
        assert_eq!(p.coeff(&crate::poly::Mono::var(1, Var::X(0))), ratio(-1, 2));
        assert_eq!(p.constant_term(), rat(2));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("2 x1").unwrap_err();
        assert_eq!(e, Error::parse(1, 3, "unexpected 'x1'"));
        let e = parse_poly("x1 +\n  * 2").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 3, .. }));
        assert!(matches!(parse_poly("x1^100000"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("exp(x1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_epoly("exp(2*x1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_epoly("exp(u1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("y1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(x1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn ambient_override() {
        assert_eq!(parse_poly_in("x1", Some(3)).unwrap().ambient(), 3);
        assert!(parse_poly_in("x3", Some(2)).is_err());
        assert_eq!(parse_poly("7").unwrap().ambient(), 0);
    }
}
