//! Parser for radical expressions such as `-5/(3*sqrt3)` or `3^(1/4)/sqrt2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! exponent := int | '(' '-'? int ('/' int)? ')'
//! atom   := int | 'sqrt2' | 'sqrt3' | 'r2' | 'r3q' | 'sqrt(' expr ')' | '(' expr ')'
//! ```
//!
//! Fractional powers are accepted only where the result stays inside
//! Q(sqrt2, 3^(1/4)): `2^(k/2)`, `3^(k/4)`, and perfect powers of rationals.

use num_traits::One;
use rug::ops::Pow;
use rug::Integer;
use thiserror::Error;

use super::{RadicalScalar, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse scalar {input:?} at byte {pos}: {msg}")]
pub struct ExprError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

pub fn parse_radical_expr(input: &str) -> Result<RadicalScalar, ExprError> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        src: compact.as_bytes(),
        pos: 0,
        input,
    };
    let v = p.expr()?;
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RadicalScalar, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RadicalScalar, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc *= &self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                let inv = d.inverse().ok_or_else(|| self.err("division by zero"))?;
                acc *= &inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RadicalScalar, ExprError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RadicalScalar, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        self.raise(base, e)
    }

    fn exponent(&mut self) -> Result<Rational, ExprError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.int()?;
            let d = if self.eat(b'/') { self.int()? } else { Integer::from(1) };
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            if d == 0 {
                return Err(self.err("zero denominator in exponent"));
            }
            let q = Rational::new(n, d);
            Ok(if neg { -q } else { q })
        } else {
            Ok(Rational::from(self.int()?))
        }
    }

    fn raise(&self, base: RadicalScalar, e: Rational) -> Result<RadicalScalar, ExprError> {
        let positive_pow = |b: &RadicalScalar, n: &Integer| -> Result<RadicalScalar, ExprError> {
            let n = n.to_u32().ok_or_else(|| self.err("exponent too large"))?;
            Ok(Scalar::pow(b, n))
        };
        if e.is_integer() {
            let n = e.numer().clone();
            if n >= 0 {
                return positive_pow(&base, &n);
            }
            let inv = base.inverse().ok_or_else(|| self.err("negative power of zero"))?;
            return positive_pow(&inv, &(-n));
        }
        let q = base
            .as_rational()
            .ok_or_else(|| self.err("fractional power of an irrational base"))?;
        let two = Rational::from(2);
        let three = Rational::from(3);
        let num = e.numer().to_i32().ok_or_else(|| self.err("exponent too large"))?;
        let den = e.denom().to_i32().ok_or_else(|| self.err("exponent too large"))?;
        if *q == two && 2 % den == 0 {
            return Ok(RadicalScalar::monomial(Rational::one(), num * (2 / den), 0));
        }
        if *q == three && 4 % den == 0 {
            return Ok(RadicalScalar::monomial(Rational::one(), 0, num * (4 / den)));
        }
        // perfect rational power
        let (n, d) = (q.numer().clone(), q.denom().clone());
        if n < 0 {
            return Err(self.err("fractional power of a negative number"));
        }
        let rn = n.clone().root(den as u32);
        let rd = d.clone().root(den as u32);
        if rn.clone().pow(den as u32) == n && rd.clone().pow(den as u32) == d {
            let r = RadicalScalar::rational(Rational::new(rn, rd));
            return self.raise(r, Rational::from(num as i64));
        }
        Err(self.err("fractional power leaves Q(sqrt2, 3^(1/4))"))
    }

    fn int(&mut self) -> Result<Integer, ExprError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<RadicalScalar, ExprError> {
        if self.eat_word("sqrt2") || self.eat_word("r2") {
            return Ok(RadicalScalar::sqrt2());
        }
        if self.eat_word("sqrt3") {
            return Ok(RadicalScalar::sqrt3());
        }
        if self.eat_word("r3q") {
            return Ok(RadicalScalar::fourth_root3());
        }
        if self.eat_word("sqrt(") {
            let inner = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return inner
                .sqrt_monomial()
                .ok_or_else(|| self.err("square root not in Q(sqrt2, 3^(1/4))"));
        }
        if self.eat(b'(') {
            let inner = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(inner);
        }
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            let n = self.int()?;
            return Ok(RadicalScalar::rational(Rational::from(n)));
        }
        if self.peek().is_none() {
            return Err(self.err("unexpected end of input"));
        }
        Err(self.err("unexpected character"))
    }
}
