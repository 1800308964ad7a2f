use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{RadicalScalar, Rational, Scalar, Sign};

/// Exponent pair `(deg_t, deg_s)`.
type Key = (u32, u32);
type Terms = BTreeMap<Key, RadicalScalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("non-monic relation: leading coefficient in s depends on t")]
    NonMonic,
    #[error("relation does not involve s")]
    NoAuxiliary,
    #[error("only one auxiliary square-root relation is supported, got {0}")]
    TooManyRelations(usize),
    #[error("mismatched relations")]
    Mismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Defining polynomial of the auxiliary variable `s` over `K[t]`, stored in
/// solved form `s^d = sum_{k<d} c_k(t) s^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    original: Terms,
    degree: u32,
    /// `tail[k]` is `c_k(t)` as a map `deg_t -> coeff`.
    tail: Vec<BTreeMap<u32, RadicalScalar>>,
}

impl Relation {
    /// `s^2 + c*t^2 - 1`, the shape of every family relation in the tables.
    pub fn circle(c: i64) -> Relation {
        Relation::circle_with(RadicalScalar::from(c))
    }

    /// `s^2 + c*t^2 - 1` for a field element `c != 0`.
    pub fn circle_with(c: RadicalScalar) -> Relation {
        let mut terms = Terms::new();
        terms.insert((0, 2), RadicalScalar::one());
        terms.insert((2, 0), c);
        terms.insert((0, 0), RadicalScalar::from(-1));
        Relation::from_terms(terms).expect("circle relation is monic")
    }

    /// `c` when the relation has the shape `s^2 + c*t^2 - 1`.
    pub fn circle_coefficient(&self) -> Option<RadicalScalar> {
        if self.original.len() != 3 || self.degree != 2 {
            return None;
        }
        let one = self.original.get(&(0, 2))?;
        let m1 = self.original.get(&(0, 0))?;
        let c = self.original.get(&(2, 0))?;
        (one.is_one() && *m1 == -RadicalScalar::one()).then(|| c.clone())
    }

    fn from_terms(terms: Terms) -> Result<Relation, ParamError> {
        let terms: Terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let degree = terms.keys().map(|k| k.1).max().unwrap_or(0);
        if degree == 0 {
            return Err(ParamError::NoAuxiliary);
        }
        let leading: Vec<_> = terms.iter().filter(|(k, _)| k.1 == degree).collect();
        if leading.len() != 1 || leading[0].0 .0 != 0 {
            return Err(ParamError::NonMonic);
        }
        let lc_inv = leading[0].1.inverse().expect("nonzero leading coefficient");
        let mut tail = vec![BTreeMap::new(); degree as usize];
        for (&(dt, ds), c) in terms.iter() {
            if ds < degree {
                let v = -(c.clone() * lc_inv.clone());
                tail[ds as usize].insert(dt, v);
            }
        }
        Ok(Relation {
            original: terms,
            degree,
            tail,
        })
    }

    pub fn degree_in_s(&self) -> u32 {
        self.degree
    }

    /// The defining polynomial as a ring element (reduces to zero).
    pub fn as_element(&self) -> ParamRingElem {
        ParamRingElem {
            terms: self.original.clone(),
            rel: None,
        }
    }

    pub fn parse(text: &str) -> Result<Relation, ParamError> {
        let body = text.trim().strip_prefix("rel:").unwrap_or(text).trim();
        let el = parse_terms(body)?;
        Relation::from_terms(el)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel: {}", format_terms(&self.original))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of `K[t, s] / (relation)` with `K = Q(sqrt2, 3^(1/4))`.
///
/// Arithmetic reduces eagerly, so the stored representative always has
/// `s`-degree below the relation degree. Constants built by `zero()`/`one()`
/// carry no relation and adopt the one of whatever they are combined with.
#[derive(Clone)]
pub struct ParamRingElem {
    terms: Terms,
    rel: Option<Arc<Relation>>,
}

impl ParamRingElem {
    pub fn constant(c: RadicalScalar) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        ParamRingElem { terms, rel: None }
    }

    pub fn t(rel: &Arc<Relation>) -> Self {
        Self::monomial(RadicalScalar::one(), 1, 0, rel)
    }

    pub fn s(rel: &Arc<Relation>) -> Self {
        Self::monomial(RadicalScalar::one(), 0, 1, rel)
    }

    pub fn monomial(c: RadicalScalar, dt: u32, ds: u32, rel: &Arc<Relation>) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert((dt, ds), c);
        }
        ParamRingElem {
            terms,
            rel: Some(rel.clone()),
        }
        .reduced()
    }

    /// Element from an explicit term map, reduced modulo `rel`.
    pub fn from_terms(
        terms: impl IntoIterator<Item = ((u32, u32), RadicalScalar)>,
        rel: Option<Arc<Relation>>,
    ) -> Self {
        let mut out = ParamRingElem {
            terms: Terms::new(),
            rel,
        };
        for (k, c) in terms {
            add_term(&mut out.terms, k, c);
        }
        out.reduced()
    }

    pub fn relation(&self) -> Option<&Arc<Relation>> {
        self.rel.as_ref()
    }

    pub fn with_relation(mut self, rel: &Arc<Relation>) -> Self {
        self.rel = Some(rel.clone());
        self.reduced()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &RadicalScalar)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn degree_in_s(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Canonical form modulo the relation. Idempotent.
    pub fn reduce(&self) -> Result<ParamRingElem, ParamError> {
        Ok(self.clone().reduced())
    }

    fn reduced(mut self) -> Self {
        let Some(rel) = self.rel.clone() else {
            return self;
        };
        let d = rel.degree;
        loop {
            let top = self
                .terms
                .keys()
                .filter(|k| k.1 >= d)
                .max_by_key(|k| (k.1, k.0))
                .copied();
            let Some((dt, ds)) = top else { break };
            let c = self.terms.remove(&(dt, ds)).unwrap();
            // s^ds t^dt = s^(ds-d) t^dt * sum c_k(t) s^k
            for (k, poly_t) in rel.tail.iter().enumerate() {
                for (&et, ct) in poly_t {
                    add_term(&mut self.terms, (dt + et, ds - d + k as u32), c.clone() * ct.clone());
                }
            }
        }
        self
    }

    /// Numeric value at a concrete parameter `t` and branch value `s`.
    pub fn eval_f64(&self, t: f64, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(dt, ds), c)| c.to_f64() * t.powi(dt as i32) * s.powi(ds as i32))
            .sum()
    }

    /// Exact value at a rational/radical `t` together with an exact `s`.
    pub fn eval_exact(&self, t: &RadicalScalar, s: &RadicalScalar) -> RadicalScalar {
        let mut acc = RadicalScalar::zero();
        for (&(dt, ds), c) in &self.terms {
            acc += &(c.clone() * Scalar::pow(t, dt) * Scalar::pow(s, ds));
        }
        acc
    }

    pub fn parse(text: &str, rel: Option<Arc<Relation>>) -> Result<ParamRingElem, ParamError> {
        let terms = parse_terms(text)?;
        Ok(ParamRingElem::from_terms(terms, rel))
    }

    fn join_rel(&self, other: &ParamRingElem) -> Option<Arc<Relation>> {
        match (&self.rel, &other.rel) {
            (Some(a), Some(b)) => {
                assert!(Arc::ptr_eq(a, b) || **a == **b, "mixing different relation rings");
                Some(a.clone())
            }
            (a, b) => a.clone().or_else(|| b.clone()),
        }
    }
}

fn add_term(terms: &mut Terms, k: Key, c: RadicalScalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&k) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                terms.remove(&k);
            }
        }
        None => {
            terms.insert(k, c);
        }
    }
}

fn format_terms(terms: &Terms) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut keys: Vec<&Key> = terms.keys().collect();
    keys.sort_by(|a, b| (b.1, b.0).cmp(&(a.1, a.0)));
    let mut out = String::new();
    for (k, key) in keys.into_iter().enumerate() {
        let c = &terms[key];
        let (dt, ds) = *key;
        let mut vars = String::new();
        for (name, e) in [("s", ds), ("t", dt)] {
            match e {
                0 => {}
                1 => vars.push_str(&format!("*{name}")),
                _ => vars.push_str(&format!("*{name}^{e}")),
            }
        }
        let (neg, body) = match c.as_rational() {
            Some(q) => {
                let neg = q.signum() == Sign::Negative;
                let a = q.abs();
                if a.is_one() && !vars.is_empty() {
                    (neg, vars[1..].to_string())
                } else {
                    (neg, format!("{a}{vars}"))
                }
            }
            None => (false, format!("({c}){vars}")),
        };
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => out.push_str(&format!("-{body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
            (_, true) => out.push_str(&format!(" - {body}")),
        }
    }
    out
}

fn parse_terms(text: &str) -> Result<Terms, ParamError> {
    let err = |m: &str| ParamError::Parse(format!("{m} in {text:?}"));
    let text = text.trim();
    let mut terms = Terms::new();
    if text == "0" {
        return Ok(terms);
    }
    // top-level split on " + " / " - " outside parentheses
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign_neg = false;
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut i = 0;
    if text.starts_with('-') {
        sign_neg = true;
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b' ' if depth == 0
                && i + 2 < bytes.len()
                && (bytes[i + 1] == b'+' || bytes[i + 1] == b'-')
                && bytes[i + 2] == b' ' =>
            {
                pieces.push((sign_neg, &text[start..i]));
                sign_neg = bytes[i + 1] == b'-';
                i += 3;
                start = i;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    pieces.push((sign_neg, &text[start..]));
    for (neg, piece) in pieces {
        let piece = piece.trim();
        let (coef, factors_src) = if let Some(body) = piece.strip_prefix('(') {
            let close = body.find(')').ok_or_else(|| err("unclosed parenthesis"))?;
            let c: RadicalScalar = body[..close].parse().map_err(|_| err("bad coefficient"))?;
            let rest = &body[close + 1..];
            (c, rest.strip_prefix('*').unwrap_or(rest))
        } else {
            let head = piece.split('*').next().unwrap();
            match head.parse::<Rational>() {
                Ok(c) => {
                    let rest = &piece[head.len()..];
                    (RadicalScalar::from(c), rest.strip_prefix('*').unwrap_or(rest))
                }
                Err(_) => (RadicalScalar::one(), piece),
            }
        };
        let (mut dt, mut ds) = (0u32, 0u32);
        let mut coef = coef;
        for f in factors_src.split('*').filter(|f| !f.is_empty()) {
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                None => (f, 1),
            };
            match name {
                "t" => dt += e,
                "s" => ds += e,
                // radical generators written inline, as in `1/2*r2*t`
                _ => {
                    coef = coef
                        * format!("1*{f}")
                            .parse::<RadicalScalar>()
                            .map_err(|_| err("unknown factor"))?
                }
            }
        }
        add_term(&mut terms, (dt, ds), if neg { -coef } else { coef });
    }
    Ok(terms)
}

impl fmt::Display for ParamRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_terms(&self.terms))
    }
}

impl fmt::Debug for ParamRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rel {
            Some(r) => write!(f, "{} [{}]", format_terms(&self.terms), r),
            None => write!(f, "{}", format_terms(&self.terms)),
        }
    }
}

impl PartialEq for ParamRingElem {
    fn eq(&self, other: &Self) -> bool {
        let diff = self.clone() - other.clone();
        diff.terms.is_empty()
    }
}

impl From<RadicalScalar> for ParamRingElem {
    fn from(c: RadicalScalar) -> Self {
        ParamRingElem::constant(c)
    }
}

impl Zero for ParamRingElem {
    fn zero() -> Self {
        ParamRingElem {
            terms: Terms::new(),
            rel: None,
        }
    }
    fn is_zero(&self) -> bool {
        self.clone().reduced().terms.is_empty()
    }
}

impl One for ParamRingElem {
    fn one() -> Self {
        ParamRingElem::constant(RadicalScalar::one())
    }
}

impl Neg for ParamRingElem {
    type Output = ParamRingElem;
    fn neg(mut self) -> Self {
        for v in self.terms.values_mut() {
            *v = -std::mem::take(v);
        }
        self
    }
}

impl<'a> AddAssign<&'a ParamRingElem> for ParamRingElem {
    fn add_assign(&mut self, rhs: &'a ParamRingElem) {
        let rel = self.join_rel(rhs);
        for (k, c) in &rhs.terms {
            add_term(&mut self.terms, *k, c.clone());
        }
        if self.rel.is_none() && rel.is_some() {
            self.rel = rel;
            *self = std::mem::replace(self, ParamRingElem::zero()).reduced();
        }
    }
}

impl<'a> SubAssign<&'a ParamRingElem> for ParamRingElem {
    fn sub_assign(&mut self, rhs: &'a ParamRingElem) {
        *self += &(-rhs.clone());
    }
}

impl<'a> MulAssign<&'a ParamRingElem> for ParamRingElem {
    fn mul_assign(&mut self, rhs: &'a ParamRingElem) {
        let rel = self.join_rel(rhs);
        let mut out = Terms::new();
        for (&(at, as_), a) in &self.terms {
            for (&(bt, bs), b) in &rhs.terms {
                add_term(&mut out, (at + bt, as_ + bs), a.clone() * b.clone());
            }
        }
        *self = ParamRingElem { terms: out, rel }.reduced();
    }
}

impl Add for ParamRingElem {
    type Output = ParamRingElem;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for ParamRingElem {
    type Output = ParamRingElem;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for ParamRingElem {
    type Output = ParamRingElem;
    fn mul(mut self, rhs: Self) -> Self {
        self *= &rhs;
        self
    }
}

impl Scalar for ParamRingElem {
    fn from_rational(q: &Rational) -> Self {
        ParamRingElem::constant(RadicalScalar::from(q.clone()))
    }
}

/// Builds the single relation of a family; rejects nested radicals.
pub fn single_relation(rels: &[Relation]) -> Result<Arc<Relation>, ParamError> {
    match rels {
        [r] => Ok(Arc::new(r.clone())),
        _ => Err(ParamError::TooManyRelations(rels.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> Arc<Relation> {
        Arc::new(Relation::circle(1))
    }

    #[test]
    fn reduce_s_squared() {
        let rel = circle();
        let s = ParamRingElem::s(&rel);
        let t = ParamRingElem::t(&rel);
        let s2 = s.clone() * s.clone();
        let expect = ParamRingElem::one() - t.clone() * t.clone();
        assert_eq!(s2, expect);
        assert_eq!(s2.degree_in_s(), 0);
        assert_eq!(format!("{s2}"), "-t^2 + 1");
    }

    #[test]
    fn reduce_s_cubed() {
        let rel = circle();
        let s = ParamRingElem::s(&rel);
        let t = ParamRingElem::t(&rel);
        let s3 = s.clone() * s.clone() * s.clone();
        assert_eq!(s3, s.clone() * (ParamRingElem::one() - t.clone() * t));
        assert_eq!(s3.degree_in_s(), 1);
    }

    #[test]
    fn multiple_of_relation_vanishes() {
        let rel = circle();
        let t = ParamRingElem::t(&rel);
        let r = rel.as_element().with_relation(&rel);
        let t5 = Scalar::pow(&t, 5);
        assert!((r * t5).is_zero());
    }

    #[test]
    fn reduce_is_idempotent() {
        let rel = circle();
        let s = ParamRingElem::s(&rel);
        let x = Scalar::pow(&s, 7) + ParamRingElem::t(&rel);
        let once = x.reduce().unwrap();
        let twice = once.reduce().unwrap();
        assert_eq!(format!("{once}"), format!("{twice}"));
    }

    #[test]
    fn non_monic_rejected() {
        assert_eq!(Relation::parse("rel: (1)*t*s^2 + (-1)"), Err(ParamError::NonMonic));
        assert_eq!(Relation::parse("rel: (1)*t^2 + (-1)"), Err(ParamError::NoAuxiliary));
        assert!(single_relation(&[Relation::circle(1), Relation::circle(3)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let rel = Arc::new(Relation::circle(3));
        let s = ParamRingElem::s(&rel);
        let t = ParamRingElem::t(&rel);
        let x = s * ParamRingElem::constant(RadicalScalar::sqrt2())
            - t * ParamRingElem::from_rational(&Rational::new(1, 2));
        let text = x.to_string();
        let back = ParamRingElem::parse(&text, Some(rel.clone())).unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(back, x);
        let r = Relation::parse(&rel.to_string()).unwrap();
        assert_eq!(r, *rel);
        let inline = ParamRingElem::parse("1/6*r2*r3q^3*s - r2*t", Some(rel.clone())).unwrap();
        let coef: RadicalScalar = "1/6*r2*r3q^3".parse().unwrap();
        let expect = ParamRingElem::s(&rel) * ParamRingElem::constant(coef)
            - ParamRingElem::t(&rel) * ParamRingElem::constant(RadicalScalar::sqrt2());
        assert_eq!(inline, expect);
    }
}
