//! Parser for equation text such as `y^5 + 2*y^4 - 3*y^3 + a*y + x = 0`.

use std::fmt;

use annih_core::multipoly::Rational;
use annih_core::shape::{is_reserved_name, Coefficient, CoefficientBinding, Equation, EquationShape, ShapeError};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingLeadingTerm,
    NonMonicLeading,
    MissingXTerm,
    DuplicateExponent(u32),
    ReservedIdentifier(String),
    DuplicateIdentifier(String),
    DuplicateXTerm,
    NegatedSymbol(String),
    NegatedX,
    ZeroDenominator,
    UnexpectedToken(String),
    UnexpectedEnd,
    Shape(ShapeError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            MissingLeadingTerm => f.write_str("missing monic leading term y^m"),
            NonMonicLeading => f.write_str("leading y-term must have coefficient 1"),
            MissingXTerm => f.write_str("missing `+ x` term"),
            DuplicateExponent(e) => write!(f, "exponent {e} appears twice"),
            ReservedIdentifier(s) => write!(f, "identifier `{s}` is reserved"),
            DuplicateIdentifier(s) => write!(f, "identifier `{s}` is used twice"),
            DuplicateXTerm => f.write_str("`x` appears twice"),
            NegatedSymbol(s) => write!(f, "symbolic coefficient `{s}` must be added, not subtracted"),
            NegatedX => f.write_str("`x` must be added, not subtracted"),
            ZeroDenominator => f.write_str("zero denominator"),
            UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            UnexpectedEnd => f.write_str("unexpected end of input"),
            Shape(e) => write!(f, "{e}"),
        }
    }
}

/// A parse failure at a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {}", .pos + 1)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eq,
}

fn err<T>(kind: ParseErrorKind, pos: usize) -> Result<T, ParseError> {
    Err(ParseError { kind, pos })
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'=' => Tok::Eq,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return err(ParseErrorKind::UnexpectedToken(ch.to_string()), start);
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

enum Coef {
    Num(Rational),
    Sym(String),
}

struct Term {
    coef: Coef,
    exp: u32,
    pos: usize,
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t.ok_or(ParseError { kind: ParseErrorKind::UnexpectedEnd, pos: self.end })
    }

    fn unexpected<T>(&self, tok: &Tok, pos: usize) -> Result<T, ParseError> {
        let text = match tok {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Caret => "^".into(),
            Tok::Slash => "/".into(),
            Tok::Eq => "=".into(),
        };
        err(ParseErrorKind::UnexpectedToken(text), pos)
    }

    fn expect_y(&mut self) -> Result<u32, ParseError> {
        let (tok, pos) = self.next()?;
        if tok != Tok::Ident("y".into()) {
            return self.unexpected(&tok, pos);
        }
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.at += 1;
        let (tok, pos) = self.next()?;
        match tok {
            Tok::Int(n) => u32::try_from(n).or_else(|_| err(ParseErrorKind::UnexpectedToken("exponent".into()), pos)),
            t => self.unexpected(&t, pos),
        }
    }

    fn expect_star_y(&mut self) -> Result<u32, ParseError> {
        let (tok, pos) = self.next()?;
        if tok != Tok::Star {
            return self.unexpected(&tok, pos);
        }
        self.expect_y()
    }
}

/// Parses equation text into a validated [`Equation`].
pub fn parse_equation(src: &str) -> Result<Equation, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, at: 0, end: src.len() };
    let mut terms: Vec<Term> = Vec::new();
    let mut x_pos: Option<usize> = None;
    let mut first = true;
    loop {
        let mut negative = false;
        match p.peek() {
            Some(Tok::Plus) if !first => p.at += 1,
            Some(Tok::Minus) => {
                negative = true;
                p.at += 1;
            }
            Some(_) if first => {}
            None if !first => break,
            Some(Tok::Eq) if !first => break,
            _ => {
                let (tok, pos) = p.next()?;
                return p.unexpected(&tok, pos);
            }
        }
        first = false;
        let (tok, pos) = p.next()?;
        match tok {
            Tok::Ident(name) if name == "x" => {
                if negative {
                    return err(ParseErrorKind::NegatedX, pos);
                }
                if x_pos.is_some() {
                    return err(ParseErrorKind::DuplicateXTerm, pos);
                }
                x_pos = Some(pos);
            }
            Tok::Ident(name) if name == "y" => {
                p.at -= 1;
                let exp = p.expect_y()?;
                let c = if negative { -Rational::one() } else { Rational::one() };
                terms.push(Term { coef: Coef::Num(c), exp, pos });
            }
            Tok::Ident(name) => {
                if is_reserved_name(&name) {
                    return err(ParseErrorKind::ReservedIdentifier(name), pos);
                }
                if negative {
                    return err(ParseErrorKind::NegatedSymbol(name), pos);
                }
                let exp = p.expect_star_y()?;
                terms.push(Term { coef: Coef::Sym(name), exp, pos });
            }
            Tok::Int(n) => {
                let mut value = Rational::from_integer(n);
                if p.peek() == Some(&Tok::Slash) {
                    p.at += 1;
                    let (tok, dpos) = p.next()?;
                    let Tok::Int(d) = tok else {
                        return p.unexpected(&tok, dpos);
                    };
                    if d.is_zero() {
                        return err(ParseErrorKind::ZeroDenominator, dpos);
                    }
                    value /= Rational::from_integer(d);
                }
                if negative {
                    value = -value;
                }
                let exp = p.expect_star_y()?;
                terms.push(Term { coef: Coef::Num(value), exp, pos });
            }
            t => return p.unexpected(&t, pos),
        }
    }
    if p.peek() == Some(&Tok::Eq) {
        p.at += 1;
        let (tok, pos) = p.next()?;
        if tok != Tok::Int(BigInt::zero()) {
            return p.unexpected(&tok, pos);
        }
        if let Some((tok, pos)) = toks.get(p.at) {
            return p.unexpected(tok, *pos);
        }
    }
    build(terms, x_pos, src.len())
}

fn build(mut terms: Vec<Term>, x_pos: Option<usize>, end: usize) -> Result<Equation, ParseError> {
    for (i, t) in terms.iter().enumerate() {
        if terms[..i].iter().any(|s| s.exp == t.exp) {
            return err(ParseErrorKind::DuplicateExponent(t.exp), t.pos);
        }
        if let Coef::Sym(name) = &t.coef {
            if terms[..i].iter().any(|s| matches!(&s.coef, Coef::Sym(n) if n == name)) {
                return err(ParseErrorKind::DuplicateIdentifier(name.clone()), t.pos);
            }
        }
    }
    terms.sort_by(|a, b| b.exp.cmp(&a.exp));
    let Some(lead) = terms.first() else {
        return err(ParseErrorKind::MissingLeadingTerm, end);
    };
    match &lead.coef {
        Coef::Num(c) if c.is_one() => {}
        Coef::Num(_) => return err(ParseErrorKind::NonMonicLeading, lead.pos),
        Coef::Sym(_) => return err(ParseErrorKind::MissingLeadingTerm, lead.pos),
    }
    if x_pos.is_none() {
        return err(ParseErrorKind::MissingXTerm, end);
    }
    let m = lead.exp;
    let lead_pos = lead.pos;
    let mut exps = Vec::new();
    let mut coeffs = Vec::new();
    for t in terms.into_iter().skip(1) {
        let c = match t.coef {
            Coef::Num(v) if v.is_zero() => continue,
            Coef::Num(v) => Coefficient::Numeric(v),
            Coef::Sym(s) => Coefficient::Symbolic(s),
        };
        exps.push(t.exp);
        coeffs.push(c);
    }
    let shape = EquationShape::new(m, exps).map_err(|e| ParseError { kind: ParseErrorKind::Shape(e), pos: lead_pos })?;
    let binding = CoefficientBinding::new(coeffs).map_err(|e| ParseError { kind: ParseErrorKind::Shape(e), pos: lead_pos })?;
    Equation::new(shape, binding).map_err(|e| ParseError { kind: ParseErrorKind::Shape(e), pos: lead_pos })
}
