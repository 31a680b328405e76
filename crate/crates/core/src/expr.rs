//! Text syntax for scalars and algebra elements.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := atom ['^' integer]
//! atom    := integer | 'z' | 'x' index | 'y' index | 'g' element | '(' expr ')'
//! ```
//!
//! `z` is ζ_ℓ of the coefficient field, `x_i` = t*ᵢ and `y_i` = tᵢ are
//! 1-based, `g_k` is the 0-based group element index (g0 is the identity).
//! Factors are multiplied in the written order; `/` only accepts a scalar
//! divisor. Scalars alone use the same grammar without x, y and g.

use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::pbw::{CherednikAlgebra, PbwElement, PbwError, PbwKey};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(char, Option<u64>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((col, Tok::Plus)),
            '-' => out.push((col, Tok::Minus)),
            '*' => out.push((col, Tok::Star)),
            '/' => out.push((col, Tok::Slash)),
            '^' => out.push((col, Tok::Caret)),
            '(' => out.push((col, Tok::LParen)),
            ')' => out.push((col, Tok::RParen)),
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((col, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            'x' | 'y' | 'g' | 'z' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if start == i {
                    None
                } else {
                    let s: String = chars[start..i].iter().collect();
                    Some(s.parse().map_err(|_| ExprError {
                        column: col,
                        message: "index too large".into(),
                    })?)
                };
                out.push((col, Tok::Ident(c, idx)));
                continue;
            }
            _ => {
                return Err(ExprError {
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// What the parser builds: scalars or algebra elements.
trait Semantics {
    type Value: Clone;
    fn scalar(&self, s: Scalar) -> Self::Value;
    fn atom(&self, name: char, index: Option<u64>, column: usize) -> Result<Self::Value, ExprError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value, column: usize) -> Result<Self::Value, ExprError>;
    fn as_scalar(&self, a: &Self::Value) -> Option<Scalar>;
    fn one(&self) -> Self::Value {
        self.scalar(Scalar::one())
    }
}

struct Parser<'a, S: Semantics> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sem: &'a S,
}

impl<S: Semantics> Parser<'_, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<S::Value, ExprError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = self.sem.neg(acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.sem.add(acc, t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.sem.add(acc, self.sem.neg(t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<S::Value, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let col = self.column();
                    let f = self.factor()?;
                    acc = self.sem.mul(acc, f, col)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.column();
                    let f = self.factor()?;
                    let Some(s) = self.sem.as_scalar(&f) else {
                        return Err(ExprError {
                            column: col,
                            message: "divisor must be a scalar".into(),
                        });
                    };
                    let inv = s.inv().map_err(|_| ExprError {
                        column: col,
                        message: "division by zero".into(),
                    })?;
                    acc = self.sem.mul(acc, self.sem.scalar(inv), col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<S::Value, ExprError> {
        let col = self.column();
        let base = match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Int(n))) => {
                self.pos += 1;
                self.sem.scalar(Scalar::from_bigint(n))
            }
            Some((c, Tok::Ident(name, idx))) => {
                self.pos += 1;
                self.sem.atom(name, idx, c)?
            }
            Some((_, Tok::LParen)) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                v
            }
            Some(_) => return self.err("expected a number, variable or `(`"),
            None => return self.err("unexpected end of input"),
        };
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Int(n))) => {
                self.pos += 1;
                u32::try_from(n).map_err(|_| ExprError {
                    column: col,
                    message: "exponent too large".into(),
                })?
            }
            _ => return self.err("expected a nonnegative integer exponent"),
        };
        let mut acc = self.sem.one();
        for _ in 0..e {
            acc = self.sem.mul(acc, base.clone(), col)?;
        }
        Ok(acc)
    }
}

fn run<S: Semantics>(sem: &S, text: &str) -> Result<S::Value, ExprError> {
    let toks = tokenize(text)?;
    let end = text.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end, sem };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

struct ScalarSem {
    conductor: u32,
}

impl Semantics for ScalarSem {
    type Value = Scalar;

    fn scalar(&self, s: Scalar) -> Scalar {
        s
    }

    fn atom(&self, name: char, index: Option<u64>, column: usize) -> Result<Scalar, ExprError> {
        zeta_atom(self.conductor, name, index, column)
    }

    fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        a + b
    }

    fn neg(&self, a: Scalar) -> Scalar {
        -a
    }

    fn mul(&self, a: Scalar, b: Scalar, _column: usize) -> Result<Scalar, ExprError> {
        Ok(&a * &b)
    }

    fn as_scalar(&self, a: &Scalar) -> Option<Scalar> {
        Some(a.clone())
    }
}

fn zeta_atom(conductor: u32, name: char, index: Option<u64>, column: usize) -> Result<Scalar, ExprError> {
    if name != 'z' || index.is_some() {
        return Err(ExprError {
            column,
            message: format!("`{name}` is not a scalar"),
        });
    }
    if conductor <= 2 {
        return Err(ExprError {
            column,
            message: "`z` needs a cyclotomic coefficient field".into(),
        });
    }
    Scalar::zeta(conductor).map_err(|e| ExprError {
        column,
        message: e.to_string(),
    })
}

/// Parses a scalar of ℚ(ζ_ℓ); `conductor` ≤ 2 means ℚ.
pub fn parse_scalar(text: &str, conductor: u32) -> Result<Scalar, ExprError> {
    run(&ScalarSem { conductor }, text)
}

struct ElementSem<'a> {
    alg: &'a CherednikAlgebra,
    conductor: u32,
}

impl Semantics for ElementSem<'_> {
    type Value = PbwElement;

    fn scalar(&self, s: Scalar) -> PbwElement {
        PbwElement::scalar(self.alg.dim(), s)
    }

    fn atom(&self, name: char, index: Option<u64>, column: usize) -> Result<PbwElement, ExprError> {
        let n = self.alg.dim();
        let bad = |message: String| ExprError { column, message };
        match (name, index) {
            ('z', _) => zeta_atom(self.conductor, name, index, column).map(|s| self.scalar(s)),
            ('x' | 'y', Some(i)) if (1..=n as u64).contains(&i) => Ok(if name == 'x' {
                PbwElement::x(n, i as usize - 1)
            } else {
                PbwElement::y(n, i as usize - 1)
            }),
            ('x' | 'y', _) => Err(bad(format!("`{name}` needs an index in 1..={n}"))),
            ('g', Some(k)) if k < self.alg.order() as u64 => Ok(PbwElement::group_element(n, k as usize)),
            ('g', _) => Err(bad(format!(
                "`g` needs an element index in 0..{}",
                self.alg.order()
            ))),
            _ => Err(bad(format!("unknown symbol `{name}`"))),
        }
    }

    fn add(&self, a: PbwElement, b: PbwElement) -> PbwElement {
        &a + &b
    }

    fn neg(&self, a: PbwElement) -> PbwElement {
        -&a
    }

    fn mul(&self, a: PbwElement, b: PbwElement, column: usize) -> Result<PbwElement, ExprError> {
        self.alg.multiply(&a, &b).map_err(|e: PbwError| ExprError {
            column,
            message: e.to_string(),
        })
    }

    fn as_scalar(&self, a: &PbwElement) -> Option<Scalar> {
        let n = self.alg.dim();
        match a.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (k, c) = a.terms().iter().next()?;
                (k.x.is_one() && k.y.is_one() && k.g == 0 && k.x.nvars() == n).then(|| c.clone())
            }
            _ => None,
        }
    }
}

/// Parses an element and evaluates it in the algebra.
pub fn parse_element(text: &str, alg: &CherednikAlgebra) -> Result<PbwElement, ExprError> {
    let conductor = alg.reflection_group().group().conductor();
    run(&ElementSem { alg, conductor }, text)
}

fn write_word(f: &mut impl fmt::Write, key: &PbwKey) -> fmt::Result {
    let mut parts = Vec::new();
    if !key.x.is_one() {
        parts.push(key.x.to_string_with("x"));
    }
    if key.g != 0 {
        parts.push(format!("g{}", key.g));
    }
    if !key.y.is_one() {
        parts.push(key.y.to_string_with("y"));
    }
    f.write_str(&parts.join("*"))
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (key, c)) in self.terms().iter().enumerate() {
            let plain = key.x.is_one() && key.y.is_one() && key.g == 0;
            match c.as_rational() {
                Some(q) => {
                    let negative = q.is_negative();
                    match (pos, negative) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    let a = q.abs();
                    let unit = a == num_rational::BigRational::from_integer(1.into());
                    if plain {
                        write!(f, "{a}")?;
                    } else {
                        if !unit {
                            write!(f, "{a}*")?;
                        }
                        write_word(f, key)?;
                    }
                }
                None => {
                    if pos > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "({c})")?;
                    if !plain {
                        f.write_str("*")?;
                        write_word(f, key)?;
                    }
                }
            }
        }
        Ok(())
    }
}
