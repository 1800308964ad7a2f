//! Multivariate polynomials with exact coefficients over a declared variable
//! table, plus the plain-text system file format.

mod monomial;
mod system;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::{ParamRingElem, RadicalScalar, Rational, Scalar};

pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use system::PolySystem;
pub use text::{parse_poly, SyntaxError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live over different variable tables ({0} vs {1})")]
    VarTableMismatch(String, String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("too many variables: {0} (max {MAX_VARS})")]
    TooManyVariables(usize),
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Ordered list of variable names. Position 0 is the largest variable for
/// every monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarTable>, PolyError> {
        if names.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(names.len()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().to_string();
            if !seen.insert(n.clone()) {
                return Err(PolyError::DuplicateVariable(n));
            }
            out.push(n);
        }
        Ok(Arc::new(VarTable { names: out }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(","))
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Maps a coefficient into the ring a polynomial is evaluated in.
pub trait Embed<T> {
    fn embed(&self) -> T;
}

impl<T: Scalar> Embed<T> for Rational {
    fn embed(&self) -> T {
        T::from_rational(self)
    }
}

impl Embed<RadicalScalar> for RadicalScalar {
    fn embed(&self) -> RadicalScalar {
        self.clone()
    }
}

impl Embed<ParamRingElem> for RadicalScalar {
    fn embed(&self) -> ParamRingElem {
        ParamRingElem::constant(self.clone())
    }
}

impl Embed<f64> for RadicalScalar {
    fn embed(&self) -> f64 {
        self.to_f64()
    }
}

/// Sparse polynomial; terms sorted strictly descending under `order`, no zero
/// coefficients.
#[derive(Clone)]
pub struct Poly<C> {
    vars: Arc<VarTable>,
    order: MonomialOrder,
    terms: Vec<(Monomial, C)>,
}

impl<C: Scalar> Poly<C> {
    pub fn zero(vars: &Arc<VarTable>, order: MonomialOrder) -> Self {
        Poly {
            vars: vars.clone(),
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, order: MonomialOrder, c: C) -> Self {
        Self::from_terms(vars, order, vec![(Monomial::one(), c)])
    }

    pub fn var(vars: &Arc<VarTable>, order: MonomialOrder, i: usize) -> Self {
        Self::from_terms(vars, order, vec![(Monomial::var(i), C::one())])
    }

    pub fn named_var(vars: &Arc<VarTable>, order: MonomialOrder, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var(vars, order, vars.require(name)?))
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(vars: &Arc<VarTable>, order: MonomialOrder, terms: Vec<(Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            vars: vars.clone(),
            order,
            terms,
        }
    }

    /// Terms already sorted descending and free of zeros.
    pub(crate) fn from_sorted_terms(vars: &Arc<VarTable>, order: MonomialOrder, terms: Vec<(Monomial, C)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| order.cmp(&w[0].0, &w[1].0).is_gt()));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly {
            vars: vars.clone(),
            order,
            terms,
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let mut mask = 0u32;
        for (m, _) in &self.terms {
            mask |= m.support_mask();
        }
        (0..self.vars.len()).filter(|i| mask & (1 << i) != 0).collect()
    }

    /// Same polynomial, re-sorted for another order.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            vars: self.vars.clone(),
            order,
            terms,
        }
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// variable that occurs (by name).
    pub fn rename_into(&self, target: &Arc<VarTable>, order: MonomialOrder) -> Result<Self, PolyError> {
        let mut map = vec![usize::MAX; self.vars.len()];
        for i in self.support() {
            map[i] = target.require(self.vars.name(i))?;
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = [0u16; MAX_VARS];
                for (i, &slot) in map.iter().enumerate() {
                    if m.exp(i) > 0 {
                        e[slot] = m.exp(i);
                    }
                }
                (Monomial::from_exps(&e[..target.len()]), c.clone())
            })
            .collect();
        Ok(Self::from_terms(target, order, terms))
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || *self.vars == *other.vars {
            Ok(())
        } else {
            Err(PolyError::VarTableMismatch(
                self.vars.to_string(),
                other.vars.to_string(),
            ))
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let rhs = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0, rhs(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut c = a[i].1.clone();
                    if negate {
                        c -= &b[j].1;
                    } else {
                        c += &b[j].1;
                    }
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, rhs(c))));
        Poly::from_sorted_terms(&self.vars, order, out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let other = if other.order == self.order {
            other.clone()
        } else {
            other.with_order(self.order)
        };
        Ok(self.merge(&other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let other = if other.order == self.order {
            other.clone()
        } else {
            other.with_order(self.order)
        };
        Ok(self.merge(&other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let mut c = ca.clone();
                c *= cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = self.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Ok(Poly::from_sorted_terms(&self.vars, order, terms))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.vars, self.order);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let mut y = x.clone();
                y *= c;
                (!y.is_zero()).then_some((*m, y))
            })
            .collect();
        Poly::from_sorted_terms(&self.vars, self.order, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect();
        Poly::from_sorted_terms(&self.vars, self.order, terms)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(&self.vars, self.order, C::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.vars.len() {
            return Err(PolyError::UnknownVariable(format!("#{var}")));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                let mut c = c.clone();
                c *= &C::from_int(e as i64);
                (m.with_exp(var, e - 1), c)
            })
            .collect();
        Ok(Self::from_terms(&self.vars, self.order, terms))
    }

    pub fn diff_named(&self, name: &str) -> Result<Self, PolyError> {
        self.diff(self.vars.require(name)?)
    }

    /// Full evaluation in any scalar ring the coefficients embed into.
    pub fn eval<T>(&self, values: &[T]) -> Result<T, PolyError>
    where
        T: Scalar,
        C: Embed<T>,
    {
        if values.len() != self.vars.len() {
            return Err(PolyError::AssignmentLength {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        let mut powers: Vec<Vec<T>> = values.iter().map(|v| vec![T::one(), v.clone()]).collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t: T = c.embed();
            for (i, p) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while p.len() <= e {
                    let mut nxt = p[p.len() - 1].clone();
                    nxt *= &p[1];
                    p.push(nxt);
                }
                t *= &p[e];
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Evaluation from a name → value list; every occurring variable must be
    /// assigned.
    pub fn eval_named<T>(&self, assignment: &[(&str, T)]) -> Result<T, PolyError>
    where
        T: Scalar,
        C: Embed<T>,
    {
        let mut values: Vec<Option<T>> = vec![None; self.vars.len()];
        for (name, v) in assignment {
            values[self.vars.require(name)?] = Some(v.clone());
        }
        for i in self.support() {
            if values[i].is_none() {
                return Err(PolyError::UnknownVariable(format!(
                    "{} (unassigned)",
                    self.vars.name(i)
                )));
            }
        }
        let full: Vec<T> = values.into_iter().map(|v| v.unwrap_or_else(T::zero)).collect();
        self.eval(&full)
    }

    /// Substitutes values for some variables, keeping the others symbolic.
    /// The result lives over the same variable table with coefficients in `T`.
    pub fn specialize<T>(&self, values: &[Option<T>]) -> Result<Poly<T>, PolyError>
    where
        T: Scalar,
        C: Embed<T>,
    {
        if values.len() != self.vars.len() {
            return Err(PolyError::AssignmentLength {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        let mut powers: Vec<Vec<T>> = values
            .iter()
            .map(|v| match v {
                Some(x) => vec![T::one(), x.clone()],
                None => Vec::new(),
            })
            .collect();
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut t: T = c.embed();
            let mut mono = *m;
            for (i, p) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 || p.is_empty() {
                    continue;
                }
                while p.len() <= e {
                    let mut nxt = p[p.len() - 1].clone();
                    nxt *= &p[1];
                    p.push(nxt);
                }
                t *= &p[e];
                mono = mono.with_exp(i, 0);
            }
            out.push((mono, t));
        }
        Ok(Poly::from_terms(&self.vars, self.order, out))
    }

    /// Substitutes polynomials for variables (by index); unassigned
    /// variables stay.
    pub fn substitute(&self, subs: &[(usize, Poly<C>)]) -> Result<Self, PolyError> {
        for (_, p) in subs {
            self.check_same(p)?;
        }
        let mut acc = Poly::zero(&self.vars, self.order);
        let mut cache: HashMap<(usize, u16), Poly<C>> = HashMap::new();
        for (m, c) in &self.terms {
            let mut mono = *m;
            let mut t = Poly::constant(&self.vars, self.order, c.clone());
            for (i, p) in subs {
                let e = m.exp(*i);
                if e == 0 {
                    continue;
                }
                mono = mono.with_exp(*i, 0);
                let pe = cache.entry((*i, e)).or_insert_with(|| p.pow(e as u32)).clone();
                t = &t * &pe;
            }
            acc = &acc + &t.mul_monomial(&mono);
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).collect();
        Poly::from_terms(&self.vars, self.order, terms)
    }

    /// Coefficients `[c0, c1, ...]` if only variable `var` occurs.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<C>> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![C::zero(); deg + 1];
        for (m, c) in &self.terms {
            if m.degree() != m.exp(var) as u32 {
                return None;
            }
            out[m.exp(var) as usize] = c.clone();
        }
        Some(out)
    }
}

impl Poly<Rational> {
    /// Scales to an integer primitive polynomial with positive leading
    /// coefficient.
    pub fn primitive(&self) -> Poly<Rational> {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = rug::Integer::from(1);
        for (_, c) in &self.terms {
            lcm.lcm_mut(c.denom());
        }
        let mut g = rug::Integer::new();
        for (_, c) in &self.terms {
            let v = rug::Integer::from(c.numer() * &lcm) / c.denom();
            g.gcd_mut(&v);
        }
        let mut scale = Rational::new(lcm, g);
        if self.terms[0].1.signum() == crate::exactnum::Sign::Negative {
            scale = -scale;
        }
        self.scale(&scale)
    }

    pub fn monic(&self) -> Poly<Rational> {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.recip().unwrap()),
            None => self.clone(),
        }
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64();
                for (i, v) in values.iter().enumerate() {
                    let e = m.exp(i);
                    if e > 0 {
                        t *= v.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }
}

impl<C: Scalar> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.check_same(other).is_err() {
            return false;
        }
        if self.order == other.order {
            self.terms == other.terms
        } else {
            self.terms.len() == other.terms.len() && self.terms == other.with_order(self.order).terms
        }
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_poly(self))
    }
}

impl<C: Scalar> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.order, text::format_poly(self))
    }
}

impl<'a, C: Scalar> Add for &'a Poly<C> {
    type Output = Poly<C>;
    /// Panics on mismatched variable tables; use `checked_add` otherwise.
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        self.checked_add(rhs).expect("poly add")
    }
}

impl<'a, C: Scalar> Sub for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        self.checked_sub(rhs).expect("poly sub")
    }
}

impl<'a, C: Scalar> Mul for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        self.checked_mul(rhs).expect("poly mul")
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Poly<C>) -> Poly<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vt(names: &[&str]) -> Arc<VarTable> {
        VarTable::new(names).unwrap()
    }

    fn p(vars: &Arc<VarTable>, s: &str) -> Poly<Rational> {
        parse_poly(s, vars, MonomialOrder::Lex).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let v = vt(&["x"]);
        assert_eq!(&p(&v, "x + 1") * &p(&v, "x - 1"), p(&v, "x^2 - 1"));
        let q = p(&v, "3*x^2 - 1/2");
        assert_eq!(&q + &Poly::zero(&v, MonomialOrder::Lex), q);
        let v6 = vt(&["A", "B", "C", "D", "E", "F"]);
        let d = &p(&v6, "A*B*C*D*E*F - 1") - &p(&v6, "A*B*C*D*E*F");
        assert_eq!(d, p(&v6, "-1"));
    }

    #[test]
    fn mismatched_tables_error() {
        let a = p(&vt(&["x"]), "x");
        let b = p(&vt(&["y"]), "y");
        assert!(matches!(a.checked_add(&b), Err(PolyError::VarTableMismatch(..))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn derivative_examples() {
        let v = vt(&["A", "B", "C", "D", "E", "F", "Y", "Z", "MU"]);
        let f = p(&v, "A^2*Y^2*Z^2");
        assert_eq!(f.diff_named("A").unwrap(), p(&v, "2*A*Y^2*Z^2"));
        let g = p(&v, "A*B*C*D*E*F");
        assert!(g.diff_named("MU").unwrap().is_zero());
        assert!(matches!(g.diff_named("Q"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn evaluation_and_specialization() {
        let v = vt(&["x", "y"]);
        let f = p(&v, "x^2*y - 3*y + 1");
        let val: Rational = f.eval(&[Rational::from(2), Rational::from(5)]).unwrap();
        assert_eq!(val, Rational::from(6));
        let g = f.specialize(&[Some(RadicalScalar::sqrt2()), None]).unwrap();
        // 2*y - 3*y + 1 = -y + 1
        assert_eq!(g.to_string(), "-y + 1");
        let named: Rational = f
            .eval_named(&[("x", Rational::from(1)), ("y", Rational::from(1))])
            .unwrap();
        assert_eq!(named, Rational::from(-1));
        assert!(f.eval_named::<Rational>(&[("x", Rational::from(1))]).is_err());
    }

    #[test]
    fn substitution_of_polys() {
        let v = vt(&["x", "y"]);
        let f = p(&v, "x^2 + y");
        let g = f.substitute(&[(0, p(&v, "y + 1"))]).unwrap();
        assert_eq!(g, p(&v, "y^2 + 3*y + 1"));
    }

    #[test]
    fn primitive_part() {
        let v = vt(&["x"]);
        let f = p(&v, "-2/3*x + 4/9");
        assert_eq!(f.primitive(), p(&v, "3*x - 2"));
    }
}
