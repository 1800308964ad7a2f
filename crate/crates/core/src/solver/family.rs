//! One-parameter solution families over `K[t, s]/(s^2 + c*t^2 - 1)` and their
//! exact verification.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::SolverError;
use crate::exactnum::{FieldScalar, ParamRingElem, RadicalScalar, Relation, Sign};
use crate::poly::PolySystem;

/// A one-parameter family of solutions.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    /// Variable that was promoted to the parameter `t`.
    pub parameter: String,
    /// The single square-root relation, if a square root was needed.
    pub relation: Option<Arc<Relation>>,
    /// Real parameter range `[lo, hi]`; `None` if unbounded.
    pub domain: Option<(RadicalScalar, RadicalScalar)>,
    pub vars: Vec<String>,
    pub values: Vec<ParamRingElem>,
}

impl SolutionFamily {
    pub fn new(
        parameter: String,
        relation: Option<Arc<Relation>>,
        vars: Vec<String>,
        values: Vec<ParamRingElem>,
    ) -> Self {
        let values = match &relation {
            Some(r) => values.into_iter().map(|v| v.with_relation(r)).collect(),
            None => values,
        };
        let domain = relation.as_ref().and_then(|r| circle_domain(r));
        SolutionFamily {
            parameter,
            relation,
            domain,
            vars,
            values,
        }
    }

    pub fn value(&self, name: &str) -> Option<&ParamRingElem> {
        self.vars.iter().position(|v| v == name).map(|k| &self.values[k])
    }

    /// Point of the family at parameter `t`, on the branch with the given
    /// sign of `s`. `None` outside the real domain.
    pub fn sample_f64(&self, t: f64, s_sign: f64) -> Option<Vec<(String, f64)>> {
        let s = match &self.relation {
            None => 0.0,
            Some(r) => {
                let c = r.circle_coefficient()?.to_f64();
                let sq = 1.0 - c * t * t;
                if sq < -1e-15 {
                    return None;
                }
                s_sign * sq.max(0.0).sqrt()
            }
        };
        Some(
            self.vars
                .iter()
                .cloned()
                .zip(self.values.iter().map(|v| v.eval_f64(t, s)))
                .collect(),
        )
    }

    /// Exact point at a rational-or-radical `t` with matching exact `s`.
    pub fn sample_exact(&self, t: &RadicalScalar, s: &RadicalScalar) -> Vec<(String, RadicalScalar)> {
        self.vars
            .iter()
            .cloned()
            .zip(self.values.iter().map(|v| v.eval_exact(t, s)))
            .collect()
    }

    /// The same family with `s` replaced by `-s`.
    pub fn flip_s(&self) -> SolutionFamily {
        let values = self
            .values
            .iter()
            .map(|v| {
                ParamRingElem::from_terms(
                    v.terms()
                        .map(|((dt, ds), c)| ((dt, ds), if ds % 2 == 1 { -c.clone() } else { c.clone() })),
                    self.relation.clone(),
                )
            })
            .collect();
        SolutionFamily { values, ..self.clone() }
    }

    /// Same values as `other` up to `s -> -s`.
    pub fn same_as(&self, other: &SolutionFamily) -> bool {
        if self.vars != other.vars {
            return false;
        }
        let eq = |a: &SolutionFamily| a.values.iter().zip(&other.values).all(|(x, y)| x == y);
        eq(self) || eq(&self.flip_s())
    }
}

/// `[-1/sqrt(c), 1/sqrt(c)]` for `s^2 + c*t^2 - 1` with `c > 0`.
fn circle_domain(rel: &Relation) -> Option<(RadicalScalar, RadicalScalar)> {
    let c = rel.circle_coefficient()?;
    if c.sign() != Sign::Positive {
        return None;
    }
    let end = c.sqrt_monomial()?.inverse()?;
    Some((-end.clone(), end))
}

/// Value of a field constant, if the element does not involve `t` or `s`.
pub(crate) fn as_constant(e: &ParamRingElem) -> Option<RadicalScalar> {
    let mut out = RadicalScalar::zero();
    for ((dt, ds), c) in e.terms() {
        if dt != 0 || ds != 0 {
            return None;
        }
        out = c.clone();
    }
    Some(out)
}

pub(crate) fn param_t(rel: Option<&Arc<Relation>>) -> ParamRingElem {
    ParamRingElem::from_terms([((1, 0), RadicalScalar::one())], rel.cloned())
}

/// Horner evaluation of `sum coeffs[k] x^k`.
pub(crate) fn eval_coeffs(coeffs: &[ParamRingElem], x: &ParamRingElem) -> ParamRingElem {
    let mut acc = ParamRingElem::zero();
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

pub(crate) fn scale_const(e: &ParamRingElem, k: &RadicalScalar) -> ParamRingElem {
    e.clone() * ParamRingElem::constant(k.clone())
}

/// Square root of a polynomial in `t` over the field, if it is a perfect
/// square with monomial leading coefficient.
fn sqrt_poly_t(p: &BTreeMap<u32, RadicalScalar>) -> Option<BTreeMap<u32, RadicalScalar>> {
    let (&top, lc) = p.iter().next_back()?;
    if top % 2 == 1 {
        return None;
    }
    let n = top / 2;
    let rn = lc.sqrt_monomial()?;
    let two_rn_inv = (RadicalScalar::from(2) * rn.clone()).inverse()?;
    let mut r: BTreeMap<u32, RadicalScalar> = BTreeMap::new();
    r.insert(n, rn);
    for k in (0..n).rev() {
        // coefficient of t^(n+k) in r^2 determines r_k
        let mut acc = p.get(&(n + k)).cloned().unwrap_or_default();
        for i in (k + 1)..n {
            let j = n + k - i;
            if j <= k || j >= n {
                continue;
            }
            if let (Some(a), Some(b)) = (r.get(&i), r.get(&j)) {
                acc -= &(a.clone() * b.clone());
            }
        }
        let rk = acc * two_rn_inv.clone();
        if !rk.is_zero() {
            r.insert(k, rk);
        }
    }
    // verify
    let mut sq: BTreeMap<u32, RadicalScalar> = BTreeMap::new();
    for (i, a) in &r {
        for (j, b) in &r {
            let e = sq.entry(i + j).or_default();
            *e += &(a.clone() * b.clone());
        }
    }
    sq.retain(|_, v| !v.is_zero());
    (sq == *p).then_some(r)
}

/// Outcome of taking a square root inside the parameter ring.
pub(crate) struct RingSqrt {
    pub root: ParamRingElem,
    /// Set when the root needed a new relation `s^2 + c*t^2 - 1`.
    pub new_relation: Option<Arc<Relation>>,
}

/// Square root of `d` in `K[t, s]/(rel)`, possibly introducing the relation
/// when none exists yet. Handles perfect squares in `K[t]`, constant
/// multiples of `s^2`, and `d0 + d2*t^2` with `d0 > 0` a square in `K`.
pub(crate) fn sqrt_in_ring(d: &ParamRingElem, rel: Option<&Arc<Relation>>) -> Option<RingSqrt> {
    let mut poly_t: BTreeMap<u32, RadicalScalar> = BTreeMap::new();
    for ((dt, ds), c) in d.terms() {
        if ds != 0 {
            return None;
        }
        poly_t.insert(dt, c.clone());
    }
    if let Some(r) = sqrt_poly_t(&poly_t) {
        let root = ParamRingElem::from_terms(r.into_iter().map(|(k, c)| ((k, 0), c)), rel.cloned());
        return Some(RingSqrt {
            root,
            new_relation: None,
        });
    }
    match rel {
        Some(rel) => {
            let s = ParamRingElem::s(rel);
            let s2 = s.clone() * s.clone();
            let d0 = poly_t.get(&0)?;
            let s20 = as_constant_term(&s2)?;
            let kappa = d0.div_exact(&s20)?;
            if scale_const(&s2, &kappa) != *d {
                return None;
            }
            let rk = kappa.sqrt_monomial()?;
            Some(RingSqrt {
                root: scale_const(&s, &rk),
                new_relation: None,
            })
        }
        None => {
            if poly_t.len() != 2 {
                return None;
            }
            let d0 = poly_t.get(&0)?;
            let d2 = poly_t.get(&2)?;
            if d0.sign() != Sign::Positive {
                return None;
            }
            let c = -(d2.div_exact(d0)?);
            let r0 = d0.sqrt_monomial()?;
            let rel = Arc::new(Relation::circle_with(c));
            Some(RingSqrt {
                root: scale_const(&ParamRingElem::s(&rel), &r0),
                new_relation: Some(rel),
            })
        }
    }
}

fn as_constant_term(e: &ParamRingElem) -> Option<RadicalScalar> {
    e.terms().find(|(k, _)| *k == (0, 0)).map(|(_, c)| c.clone())
}

/// Per-polynomial residuals of a family substituted into a system.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub residuals: Vec<(String, ParamRingElem)>,
}

impl FamilyReport {
    pub fn is_ok(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// Index of the first polynomial whose residual does not vanish.
    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.iter().position(|(_, r)| !r.is_zero())
    }

    pub fn into_result(self) -> Result<FamilyReport, SolverError> {
        match self.first_failure() {
            None => Ok(self),
            Some(k) => Err(SolverError::FamilyResidual {
                index: k,
                poly: self.residuals[k].0.clone(),
                residual: self.residuals[k].1.to_string(),
            }),
        }
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (p, r)) in self.residuals.iter().enumerate() {
            writeln!(f, "#{:<3} residual {}  <-  {}", k + 1, r, p)?;
        }
        Ok(())
    }
}

/// Substitutes the family into every polynomial of `system` and reduces the
/// residuals in `K[t, s]/(relation)`.
pub fn verify_family(family: &SolutionFamily, system: &PolySystem) -> Result<FamilyReport, SolverError> {
    let mut values = Vec::with_capacity(system.vars.len());
    for name in system.vars.names() {
        match family.value(name) {
            Some(v) => values.push(v.clone()),
            None => return Err(SolverError::Unassigned(name.clone())),
        }
    }
    let mut residuals = Vec::with_capacity(system.polys.len());
    for p in &system.polys {
        let mut r: ParamRingElem = p.eval(&values).map_err(|e| SolverError::Poly(e.to_string()))?;
        if let Some(rel) = &family.relation {
            r = r.with_relation(rel);
        }
        residuals.push((p.to_string(), r));
    }
    Ok(FamilyReport { residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    #[test]
    fn poly_sqrt() {
        // (2t + 3)^2 = 4t^2 + 12t + 9
        let mut p = BTreeMap::new();
        p.insert(2, RadicalScalar::from(4));
        p.insert(1, RadicalScalar::from(12));
        p.insert(0, RadicalScalar::from(9));
        let r = sqrt_poly_t(&p).unwrap();
        assert_eq!(r.get(&1), Some(&RadicalScalar::from(2)));
        assert_eq!(r.get(&0), Some(&RadicalScalar::from(3)));
        p.insert(0, RadicalScalar::from(8));
        assert!(sqrt_poly_t(&p).is_none());
    }

    #[test]
    fn circle_sqrt_introduces_relation() {
        // 4 - 12 t^2 = 4 (1 - 3 t^2)
        let d = ParamRingElem::from_terms(
            [((0, 0), RadicalScalar::from(4)), ((2, 0), RadicalScalar::from(-12))],
            None,
        );
        let out = sqrt_in_ring(&d, None).unwrap();
        let rel = out.new_relation.unwrap();
        assert_eq!(rel.circle_coefficient(), Some(RadicalScalar::from(3)));
        let sq = out.root.clone() * out.root.clone();
        assert_eq!(sq, d.with_relation(&rel));
        // reuse: 1/3 * (1 - 3t^2) = (s/sqrt3)^2
        let d2 = ParamRingElem::from_terms(
            [
                ((0, 0), RadicalScalar::from(Rational::new(1, 3))),
                ((2, 0), RadicalScalar::from(-1)),
            ],
            Some(rel.clone()),
        );
        let out2 = sqrt_in_ring(&d2, Some(&rel)).unwrap();
        assert!(out2.new_relation.is_none());
        assert_eq!(out2.root.clone() * out2.root, d2);
    }
}
