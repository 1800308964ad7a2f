//! Laurent polynomials with rational coefficients: the scalar curvature in
//! the original coordinates has negative powers of the diagonal parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exactnum::Rational;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, SyntaxError, VarTable, MAX_VARS};

pub type Exps = [i32; MAX_VARS];

#[derive(Clone, PartialEq)]
pub struct Laurent {
    vars: Arc<VarTable>,
    terms: BTreeMap<Exps, Rational>,
}

impl Laurent {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Laurent {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rational) -> Self {
        Self::monomial(vars, c, [0; MAX_VARS])
    }

    pub fn monomial(vars: &Arc<VarTable>, c: Rational, e: Exps) -> Self {
        let mut out = Self::zero(vars);
        if !c.is_zero() {
            out.terms.insert(e, c);
        }
        out
    }

    /// `x_i^k` for any integer `k`.
    pub fn var_pow(vars: &Arc<VarTable>, i: usize, k: i32) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = k;
        Self::monomial(vars, Rational::one(), e)
    }

    pub fn named(vars: &Arc<VarTable>, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var_pow(vars, vars.require(name)?, 1))
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        let mut out = Self::zero(&self.vars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(*e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = [0; MAX_VARS];
                for k in 0..MAX_VARS {
                    e[k] = e1[k] + e2[k];
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Laurent {
        let mut acc = Self::constant(&self.vars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a single term.
    pub fn monomial_inverse(&self) -> Option<Laurent> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut inv = [0; MAX_VARS];
        for k in 0..MAX_VARS {
            inv[k] = -e[k];
        }
        Some(Self::monomial(&self.vars, c.recip()?, inv))
    }

    pub fn diff(&self, i: usize) -> Laurent {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut ne = *e;
                ne[i] -= 1;
                out.add_term(ne, c * &Rational::from(e[i] as i64));
            }
        }
        out
    }

    /// Sets variable `i` to zero.
    pub fn set_zero(&self, i: usize) -> Laurent {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            assert!(e[i] >= 0, "cannot set a variable with negative exponent to zero");
            if e[i] == 0 {
                out.terms.insert(*e, c.clone());
            }
        }
        out
    }

    pub fn eval(&self, values: &[Rational]) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, v) in values.iter().enumerate() {
                if e[k] != 0 {
                    if v.is_zero() && e[k] < 0 {
                        return None;
                    }
                    t *= &v.powi(e[k]);
                }
            }
            acc += &t;
        }
        Some(acc)
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64();
                for (k, v) in values.iter().enumerate() {
                    if e[k] != 0 {
                        t *= v.powi(e[k]);
                    }
                }
                t
            })
            .sum()
    }

    /// Componentwise minimum exponent over all terms (0 for the zero polynomial).
    pub fn min_exponents(&self) -> Exps {
        let mut lo = [0; MAX_VARS];
        for (k, slot) in lo.iter_mut().enumerate() {
            *slot = self.terms.keys().map(|e| e[k]).min().unwrap_or(0);
        }
        lo
    }

    /// Conversion when no exponent is negative.
    pub fn to_poly(&self, order: MonomialOrder) -> Option<Poly<Rational>> {
        let n = self.vars.len();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut ue = [0u16; MAX_VARS];
            for k in 0..n {
                if e[k] < 0 {
                    return None;
                }
                ue[k] = e[k] as u16;
            }
            terms.push((Monomial::from_exps(&ue[..n]), c.clone()));
        }
        Some(Poly::from_terms(&self.vars, order, terms))
    }

    /// Multiplies by the smallest monomial that makes every exponent
    /// nonnegative; returns the polynomial and that monomial's exponents.
    pub fn clear_denominators(&self, order: MonomialOrder) -> (Poly<Rational>, Exps) {
        let lo = self.min_exponents();
        let mut shift = [0; MAX_VARS];
        for k in 0..MAX_VARS {
            shift[k] = (-lo[k]).max(0);
        }
        let shifted = self.mul(&Self::monomial(&self.vars, Rational::one(), shift));
        (
            shifted.to_poly(order).expect("shift makes exponents nonnegative"),
            shift,
        )
    }

    pub fn from_poly(p: &Poly<Rational>) -> Laurent {
        let mut out = Self::zero(p.vars());
        for (m, c) in p.terms() {
            let mut e = [0; MAX_VARS];
            for (k, slot) in e.iter_mut().enumerate() {
                *slot = m.exp(k) as i32;
            }
            out.terms.insert(e, c.clone());
        }
        out
    }

    /// Substitutes for each variable `k` the monomial `prod_j y_j^(images[k][j] / den)`
    /// over `target`; fails unless every resulting exponent is a nonnegative
    /// multiple of `den`.
    pub fn monomial_substitution(
        &self,
        target: &Arc<VarTable>,
        images: &[Exps],
        den: i32,
        order: MonomialOrder,
    ) -> Result<Poly<Rational>, String> {
        assert_eq!(images.len(), self.vars.len());
        let mut acc = Laurent::zero(target);
        for (e, c) in &self.terms {
            let mut ne = [0; MAX_VARS];
            for (k, img) in images.iter().enumerate() {
                if e[k] != 0 {
                    for j in 0..MAX_VARS {
                        ne[j] += e[k] * img[j];
                    }
                }
            }
            for (j, v) in ne.iter_mut().enumerate() {
                if *v % den != 0 {
                    return Err(format!("fractional exponent of {} after substitution", target.name(j)));
                }
                *v /= den;
            }
            acc.add_term(ne, c.clone());
        }
        acc.to_poly(order)
            .ok_or_else(|| "negative exponent after substitution".to_string())
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() == crate::exactnum::Sign::Negative;
            if k > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mut parts = vec![c.abs().to_string()];
            for (i, &x) in e.iter().enumerate().take(self.vars.len()) {
                match x {
                    0 => {}
                    1 => parts.push(self.vars.name(i).to_string()),
                    _ => parts.push(format!("{}^{}", self.vars.name(i), x)),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses an arithmetic expression over `vars`: `+ - * /`, integer powers
/// (`x^2`, `x^-2`, `x^(-2)`), parentheses, and implicit multiplication by
/// juxtaposition. Division is allowed only by a single term. Newlines are
/// whitespace, so a long display can be spread over several lines; `#`
/// starts a comment that runs to the end of the line.
pub fn parse_laurent_expr(src: &str, vars: &Arc<VarTable>) -> Result<Laurent, SyntaxError> {
    let mut chars: Vec<(usize, usize, char)> = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        for (col, ch) in line.chars().enumerate() {
            if ch == '#' {
                break;
            }
            chars.push((ln + 1, col + 1, ch));
        }
        chars.push((ln + 1, line.chars().count() + 1, ' '));
    }
    let mut p = ExprParser { chars, pos: 0, vars };
    p.skip_ws();
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
    vars: &'a Arc<VarTable>,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> SyntaxError {
        let (l, c) = self
            .chars
            .get(self.pos)
            .map(|&(l, c, _)| (l, c))
            .or_else(|| self.chars.last().map(|&(l, c, _)| (l, c + 1)))
            .unwrap_or((1, 1));
        SyntaxError::new(l, c, msg)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|t| t.2)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Laurent, SyntaxError> {
        let mut acc = if self.eat('-') {
            self.term()?.scale(&-Rational::one())
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Laurent, SyntaxError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let inv = d
                    .monomial_inverse()
                    .ok_or_else(|| self.err("division by a non-monomial"))?;
                acc = acc.mul(&inv);
            } else {
                self.skip_ws();
                match self.peek() {
                    Some(c) if c.is_alphanumeric() || c == '(' || c == '_' => {
                        acc = acc.mul(&self.power()?);
                    }
                    _ => return Ok(acc),
                }
            }
        }
    }

    fn power(&mut self) -> Result<Laurent, SyntaxError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k = self.int()?;
        if paren && !self.eat(')') {
            return Err(self.err("expected ')'"));
        }
        let k: u32 = k.to_u32().ok_or_else(|| self.err("exponent too large"))?;
        if neg {
            let inv = base
                .monomial_inverse()
                .ok_or_else(|| self.err("negative power of a non-monomial"))?;
            Ok(inv.pow(k))
        } else {
            Ok(base.pow(k))
        }
    }

    fn int(&mut self) -> Result<rug::Integer, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|t| t.2).collect();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Laurent, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(Laurent::constant(self.vars, Rational::from(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|t| t.2).collect();
                match self.vars.index(&name) {
                    Some(i) => Ok(Laurent::var_pow(self.vars, i, 1)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable {name:?}")))
                    }
                }
            }
            None => Err(self.err("unexpected end of input")),
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vt() -> Arc<VarTable> {
        VarTable::new(&["a", "b", "x"]).unwrap()
    }

    #[test]
    fn parse_and_clear() {
        let l = parse_laurent_expr("a^2 b^-2 + (x - b)^2/a - 1/2", &vt()).unwrap();
        let (p, shift) = l.clear_denominators(MonomialOrder::Lex);
        assert_eq!(&shift[..3], &[1, 2, 0]);
        assert_eq!(p.to_string(), "a^3 - 1/2*a*b^2 + b^4 - 2*b^3*x + b^2*x^2");
    }

    #[test]
    fn derivative_of_negative_power() {
        let l = parse_laurent_expr("a^(-2) b", &vt()).unwrap();
        assert_eq!(l.diff(0).to_string(), "-2*a^-3*b");
        let v = l
            .eval(&[Rational::from(2), Rational::from(3), Rational::zero()])
            .unwrap();
        assert_eq!(v, Rational::new(3, 4));
    }

    #[test]
    fn multiline_and_errors() {
        let l = parse_laurent_expr("a # first\n + b\n", &vt()).unwrap();
        assert_eq!(l.num_terms(), 2);
        let e = parse_laurent_expr("a +\n q", &vt()).unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
        assert!(parse_laurent_expr("1/(a + b)", &vt()).is_err());
    }

    #[test]
    fn half_exponent_substitution() {
        // a -> sqrt(b x) applied to a^2 gives b*x
        let l = parse_laurent_expr("a^2 + 3", &vt()).unwrap();
        let mut img = vec![[0; MAX_VARS]; 3];
        img[0][1] = 1;
        img[0][2] = 1;
        img[1][1] = 2;
        img[2][2] = 2;
        let p = l.monomial_substitution(&vt(), &img, 2, MonomialOrder::Lex).unwrap();
        assert_eq!(p.to_string(), "b*x + 3");
        let l = parse_laurent_expr("a", &vt()).unwrap();
        assert!(l.monomial_substitution(&vt(), &img, 2, MonomialOrder::Lex).is_err());
    }
}
