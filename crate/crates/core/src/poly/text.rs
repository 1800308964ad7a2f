use std::sync::Arc;

use num_traits::One;
use rug::Integer;
use thiserror::Error;

use super::{Monomial, MonomialOrder, Poly, VarTable, MAX_VARS};
use crate::exactnum::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at line {line}, column {column}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

impl SyntaxError {
    pub(crate) fn new(line: usize, column: usize, msg: impl Into<String>) -> Self {
        SyntaxError {
            line,
            column,
            msg: msg.into(),
        }
    }
}

/// Canonical text: terms in descending order, ` + `/` - ` separators,
/// coefficient 1 and exponent 1 omitted, factors in variable-table order.
pub(crate) fn format_poly<C: Scalar>(p: &Poly<C>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let raw = c.to_string();
        let compound = raw.contains(' ');
        let (neg, mag) = if compound {
            (false, format!("({raw})"))
        } else if let Some(rest) = raw.strip_prefix('-') {
            (true, rest.to_string())
        } else {
            (false, raw)
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if m.is_one() || mag != "1" {
            factors.push(mag);
        }
        for i in 0..p.vars().len() {
            match m.exp(i) {
                0 => {}
                1 => factors.push(p.vars().name(i).to_string()),
                e => factors.push(format!("{}^{}", p.vars().name(i), e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(Integer),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(src: &str, line: usize) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((col, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((col, Tok::Caret));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((col, Tok::Int(s.parse().unwrap())));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => return Err(SyntaxError::new(line, col, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

pub(crate) fn parse_poly_at_line(
    src: &str,
    vars: &Arc<VarTable>,
    order: MonomialOrder,
    line: usize,
) -> Result<Poly<Rational>, SyntaxError> {
    let toks = tokenize(src, line)?;
    let end_col = src.chars().count() + 1;
    if toks.is_empty() {
        return Err(SyntaxError::new(line, 1, "empty polynomial"));
    }
    let mut pos = 0;
    let mut terms: Vec<(Monomial, Rational)> = Vec::new();
    let col_at = |pos: usize| toks.get(pos).map_or(end_col, |t| t.0);
    let mut first = true;
    while pos < toks.len() {
        let mut negative = false;
        match toks[pos].1 {
            Tok::Plus => pos += 1,
            Tok::Minus => {
                negative = true;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(SyntaxError::new(line, col_at(pos), "expected '+' or '-' between terms")),
        }
        first = false;
        let mut coef = Rational::one();
        let mut exps = [0u16; MAX_VARS];
        let mut expect_factor = true;
        while expect_factor {
            match toks.get(pos).map(|t| &t.1) {
                Some(Tok::Int(n)) => {
                    let mut q = Rational::from(n.clone());
                    pos += 1;
                    if let Some((_, Tok::Slash)) = toks.get(pos) {
                        pos += 1;
                        match toks.get(pos) {
                            Some((c, Tok::Int(d))) => {
                                if *d == 0 {
                                    return Err(SyntaxError::new(line, *c, "zero denominator"));
                                }
                                q = Rational::new(n.clone(), d.clone());
                                pos += 1;
                            }
                            _ => return Err(SyntaxError::new(line, col_at(pos), "expected denominator")),
                        }
                    }
                    coef *= &q;
                }
                Some(Tok::Ident(name)) => {
                    let col = toks[pos].0;
                    let idx = vars
                        .index(name)
                        .ok_or_else(|| SyntaxError::new(line, col, format!("unknown variable {name:?}")))?;
                    pos += 1;
                    let mut e: u32 = 1;
                    if let Some((_, Tok::Caret)) = toks.get(pos) {
                        pos += 1;
                        match toks.get(pos) {
                            Some((c, Tok::Int(n))) => {
                                e = n
                                    .to_u32()
                                    .filter(|&v| v <= u16::MAX as u32)
                                    .ok_or_else(|| SyntaxError::new(line, *c, "exponent out of range"))?;
                                pos += 1;
                            }
                            _ => return Err(SyntaxError::new(line, col_at(pos), "expected exponent")),
                        }
                    }
                    let total = exps[idx] as u32 + e;
                    if total > u16::MAX as u32 {
                        return Err(SyntaxError::new(line, col, "exponent out of range"));
                    }
                    exps[idx] = total as u16;
                }
                _ => return Err(SyntaxError::new(line, col_at(pos), "expected coefficient or variable")),
            }
            match toks.get(pos).map(|t| &t.1) {
                Some(Tok::Star) => pos += 1,
                _ => expect_factor = false,
            }
        }
        if negative {
            coef = -coef;
        }
        terms.push((Monomial::from_exps(&exps[..vars.len()]), coef));
    }
    Ok(Poly::from_terms(vars, order, terms))
}

/// Parses one polynomial in the system-file term syntax.
pub fn parse_poly(src: &str, vars: &Arc<VarTable>, order: MonomialOrder) -> Result<Poly<Rational>, SyntaxError> {
    parse_poly_at_line(src, vars, order, 1)
}
