//! Germs as text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | VAR | '(' expr ')'
//! ```
//!
//! Variables are `x1`, `x2` and the aliases `x`, `y`. There is no implicit
//! multiplication and `/` only ever joins two integer literals.

use std::collections::BTreeMap;
use std::fmt;

use ejet_core::rational::Rational;
use ejet_core::PolyJet;
use num_traits::{One, Zero};

/// Exponents beyond this are rejected outright.
const MAX_EXPONENT: u32 = 64;
/// Bound on intermediate degrees, so `(x+y)^64^...` style inputs stay cheap.
const MAX_DEGREE: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Var(u8),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("number {s}"),
            Tok::Var(v) => format!("variable x{v}"),
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

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::Var(_) | Tok::LParen)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let (l0, c0) = (line, column);
        let err = |m: String| ParseError { line: l0, column: c0, message: m };
        if ch == '\n' {
            line += 1;
            column = 1;
            k += 1;
            continue;
        }
        if ch.is_whitespace() {
            column += 1;
            k += 1;
            continue;
        }
        let tok = if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            column += k - start;
            out.push(Spanned { tok: Tok::Int(s), line: l0, column: c0 });
            continue;
        } else if ch.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            column += k - start;
            let v = match s.as_str() {
                "x1" | "x" => 1,
                "x2" | "y" => 2,
                _ => return Err(err(format!("unknown identifier '{s}' (expected x1, x2, x or y)"))),
            };
            out.push(Spanned { tok: Tok::Var(v), line: l0, column: c0 });
            continue;
        } else {
            match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(err(format!("unexpected character '{ch}'"))),
            }
        };
        out.push(Spanned { tok, line: l0, column: c0 });
        column += 1;
        k += 1;
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

/// Exact bivariate polynomial used while parsing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Poly(BTreeMap<(u32, u32), Rational>);

impl Poly {
    fn constant(c: Rational) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.0.insert((0, 0), c);
        }
        p
    }

    fn var(v: u8) -> Self {
        let mut p = Poly::default();
        p.0.insert(if v == 1 { (1, 0) } else { (0, 1) }, Rational::one());
        p
    }

    fn degree(&self) -> u32 {
        self.0.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    fn add(mut self, o: &Poly, sign: i32) -> Self {
        for (k, c) in &o.0 {
            let e = self.0.entry(*k).or_insert_with(Rational::zero);
            if sign < 0 {
                *e -= c;
            } else {
                *e += c;
            }
            if e.is_zero() {
                self.0.remove(k);
            }
        }
        self
    }

    fn neg(mut self) -> Self {
        for c in self.0.values_mut() {
            *c = -c.clone();
        }
        self
    }

    fn mul(&self, o: &Poly) -> Self {
        let mut out = Poly::default();
        for (&(i1, j1), a) in &self.0 {
            for (&(i2, j2), b) in &o.0 {
                let e = out.0.entry((i1 + i2, j1 + j2)).or_insert_with(Rational::zero);
                *e += a * b;
            }
        }
        out.0.retain(|_, c| !c.is_zero());
        out
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError { line: t.line, column: t.column, message: message.into() }
    }

    fn check_degree(&self, p: &Poly, at: &Spanned) -> Result<(), ParseError> {
        if p.degree() > MAX_DEGREE {
            return Err(ParseError {
                line: at.line,
                column: at.column,
                message: format!("intermediate degree exceeds {MAX_DEGREE}"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            acc = acc.add(&rhs, sign);
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek().tok.starts_atom() {
                return Err(self.error_here("implicit multiplication is not allowed; use '*'"));
            }
            if self.peek().tok != Tok::Star {
                return Ok(acc);
            }
            let at = self.bump();
            let rhs = self.unary()?;
            acc = acc.mul(&rhs);
            self.check_degree(&acc, &at)?;
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek().tok {
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let at = self.bump();
        let e = match self.peek().tok.clone() {
            Tok::Int(s) => {
                self.bump();
                s
            }
            Tok::Minus => return Err(self.error_here("negative exponents are not allowed")),
            other => {
                return Err(self.error_here(format!(
                    "expected a nonnegative integer exponent, found {}",
                    other.describe()
                )))
            }
        };
        if self.peek().tok == Tok::Slash {
            return Err(self.error_here("exponents must be integers"));
        }
        if self.peek().tok == Tok::Caret {
            return Err(self.error_here("chained exponents are ambiguous; use parentheses"));
        }
        let e: u32 = match e.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                return Err(ParseError {
                    line: at.line,
                    column: at.column,
                    message: format!("exponent exceeds {MAX_EXPONENT}"),
                })
            }
        };
        let mut out = Poly::constant(Rational::one());
        for _ in 0..e {
            out = out.mul(&base);
            self.check_degree(&out, &at)?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.bump();
                let num: num_bigint::BigInt = n.parse().expect("digits");
                if self.peek().tok != Tok::Slash {
                    return Ok(Poly::constant(Rational::from_integer(num)));
                }
                self.bump();
                let d = match self.peek().tok.clone() {
                    Tok::Int(d) => d,
                    other => {
                        return Err(self.error_here(format!(
                            "'/' joins two integer literals, found {}",
                            other.describe()
                        )))
                    }
                };
                let den: num_bigint::BigInt = d.parse().expect("digits");
                if den.is_zero() {
                    return Err(self.error_here("zero denominator"));
                }
                self.bump();
                Ok(Poly::constant(Rational::new(num, den)))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Poly::var(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error_here(format!(
                        "expected ')', found {}",
                        self.peek().tok.describe()
                    )));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(self.error_here(format!("expected a term, found {}", other.describe()))),
        }
    }
}

/// A parsed germ together with its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermExpr {
    pub source: String,
    pub jet: PolyJet,
    pub order: u32,
}

/// Parses `text` as an exact polynomial and stores it as a jet of `order`.
/// Terms of degree above `order` are an error, never truncated.
pub fn parse_germ(text: &str, order: u32) -> Result<GermExpr, ParseError> {
    let at_start = |message: String| ParseError { line: 1, column: 1, message };
    if order < 5 {
        return Err(at_start(format!("order must be at least 5, got {order}")));
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    if p.peek().tok == Tok::End {
        return Err(p.error_here("empty expression"));
    }
    let poly = p.expr()?;
    if p.peek().tok != Tok::End {
        let msg = if p.peek().tok == Tok::RParen {
            "unbalanced ')'".to_string()
        } else {
            format!("unexpected {}", p.peek().tok.describe())
        };
        return Err(p.error_here(msg));
    }
    if let Some((&(i, j), _)) = poly.0.iter().find(|(&(i, j), _)| i + j > order) {
        return Err(at_start(format!(
            "term x1^{i}*x2^{j} has degree {} above the jet order {order}",
            i + j
        )));
    }
    let jet = PolyJet::from_terms(order, poly.0.into_iter().map(|((i, j), c)| (i, j, c)))
        .map_err(|e| at_start(e.to_string()))?;
    Ok(GermExpr { source: text.to_string(), jet, order })
}
