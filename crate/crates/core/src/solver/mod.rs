//! Real solutions from lex Groebner bases: triangular back-substitution with
//! exact arithmetic in Q(sqrt2, 3^(1/4)), real-root isolation, positivity
//! filtering and one-parameter families.
//!
//! The tower is processed from the smallest lex variable upward. At each
//! level the basis elements whose largest variable is the current one are
//! specialised at the partial solution; their common real roots extend it.
//! With constant coefficients the common roots are those of the gcd of the
//! specialisations (Gianni-Kalkbrener). Once a family parameter `t` is in
//! play, the specialisation of smallest degree with nonvanishing leading
//! coefficient is solved in closed form (degree 1 or 2) and its roots are
//! kept only if every other specialisation vanishes on them exactly.

mod family;
mod interval;
mod io;
mod roots;
mod upoly;

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{ParamRingElem, RadicalScalar, Rational, Relation, Sign};
use crate::groebner::{finiteness_test, GroebnerBasis};
use crate::poly::{MonomialOrder, Poly, PolySystem};

pub use family::{verify_family, FamilyReport, SolutionFamily};
pub use interval::RatInterval;
pub use io::{parse_solutions, write_solutions, SolutionFile, SolutionRecord};
pub use roots::{isolate_real_roots, recognize_radical, IsolatedRoot};
pub use upoly::{count_roots, root_bound, sign_changes, AbsBound, UPoly};

use family::{as_constant, eval_coeffs, param_t, scale_const, sqrt_in_ring};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("back-substitution needs a lex basis, got {0}")]
    NotLex(MonomialOrder),
    #[error("ambiguous specialization at variable {0}")]
    AmbiguousSpecialization(String),
    #[error("unsupported tower shape at variable {var}: {why}")]
    Unsupported { var: String, why: String },
    #[error("variable {0} has no value")]
    Unassigned(String),
    #[error("family residual of polynomial #{} does not vanish: {residual} (polynomial {poly})", .index + 1)]
    FamilyResidual {
        index: usize,
        poly: String,
        residual: String,
    },
    #[error("polynomial error: {0}")]
    Poly(String),
    #[error("solution file: {0}")]
    Format(String),
}

/// Value of one coordinate of a solution point.
#[derive(Clone, Debug, PartialEq)]
pub enum Coord {
    Exact(RadicalScalar),
    /// An algebraic root that was not recognised in the radical field.
    Root(IsolatedRoot<RadicalScalar>),
    /// Derived from unrecognised roots by interval back-substitution.
    Enclosed(RatInterval),
}

impl Coord {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Exact(x) => x.to_f64(),
            Coord::Root(r) => r.midpoint_f64(),
            Coord::Enclosed(i) => i.midpoint_f64(),
        }
    }

    pub fn exact(&self) -> Option<&RadicalScalar> {
        match self {
            Coord::Exact(x) => Some(x),
            _ => None,
        }
    }

    pub fn interval(&self, bits: u32) -> RatInterval {
        match self {
            Coord::Exact(x) => RatInterval::enclose(x, bits),
            Coord::Root(r) => RatInterval::new(r.lo.clone(), r.hi.clone()),
            Coord::Enclosed(i) => i.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPoint {
    pub vars: Vec<String>,
    pub values: Vec<Coord>,
    /// Upper bound on `|p(point)|` over the polynomials it was checked
    /// against; zero for exact points.
    pub residual_bound: Rational,
}

impl SolutionPoint {
    pub fn value(&self, name: &str) -> Option<&Coord> {
        self.vars.iter().position(|v| v == name).map(|k| &self.values[k])
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| matches!(v, Coord::Exact(_)))
    }

    pub fn exact_values(&self) -> Option<Vec<RadicalScalar>> {
        self.values.iter().map(|v| v.exact().cloned()).collect()
    }

    pub fn to_f64(&self) -> Vec<(String, f64)> {
        self.vars
            .iter()
            .cloned()
            .zip(self.values.iter().map(Coord::to_f64))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum Solution {
    Point(SolutionPoint),
    Family(SolutionFamily),
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Variables required to be strictly positive.
    pub positive: Vec<String>,
    /// Branches whose value for the variable differs are discarded.
    pub fixed: Vec<(String, RadicalScalar)>,
    /// Width exponent for unrecognised roots (`2^-bits`).
    pub refine_bits: u32,
}

impl SolveOptions {
    pub fn positive<S: AsRef<str>>(names: &[S]) -> Self {
        SolveOptions {
            positive: names.iter().map(|s| s.as_ref().to_string()).collect(),
            ..Default::default()
        }
    }
}

/// What back-substitution found, plus bookkeeping about discarded branches.
#[derive(Clone, Debug, Default)]
pub struct SolveOutcome {
    pub solutions: Vec<Solution>,
    pub discarded_positivity: usize,
    pub discarded_fixed: usize,
    pub zero_dimensional: bool,
}

impl SolveOutcome {
    pub fn points(&self) -> impl Iterator<Item = &SolutionPoint> {
        self.solutions.iter().filter_map(|s| match s {
            Solution::Point(p) => Some(p),
            _ => None,
        })
    }

    pub fn families(&self) -> impl Iterator<Item = &SolutionFamily> {
        self.solutions.iter().filter_map(|s| match s {
            Solution::Family(f) => Some(f),
            _ => None,
        })
    }
}

#[derive(Clone)]
struct Branch {
    vals: Vec<Option<ParamRingElem>>,
    param: Option<usize>,
    rel: Option<Arc<Relation>>,
}

struct ApproxBranch {
    coords: Vec<Option<Coord>>,
}

struct Ctx<'a> {
    names: Vec<String>,
    levels: Vec<Vec<&'a Poly<Rational>>>,
    positive: Vec<bool>,
    fixed: Vec<Option<RadicalScalar>>,
    zero_dim: bool,
    bits: u32,
}

enum Extension {
    Exact(Branch),
    Approx(ApproxBranch),
    Positivity,
    Fixed,
}

/// Enumerates the real solutions of a lex basis (see module docs).
pub fn back_substitute(basis: &GroebnerBasis, opts: &SolveOptions) -> Result<SolveOutcome, SolverError> {
    if basis.order != MonomialOrder::Lex {
        return Err(SolverError::NotLex(basis.order));
    }
    let verdict = finiteness_test(basis);
    let mut out = SolveOutcome {
        zero_dimensional: verdict.zero_dimensional,
        ..Default::default()
    };
    if basis.is_unit() || basis.polys.is_empty() {
        return Ok(out);
    }
    let n = basis.vars.len();
    let names: Vec<String> = basis.vars.names().to_vec();
    let mut levels: Vec<Vec<&Poly<Rational>>> = vec![Vec::new(); n];
    for p in &basis.polys {
        if let Some(&k) = p.support().iter().min() {
            levels[k].push(p);
        }
    }
    let mut fixed = vec![None; n];
    for (name, v) in &opts.fixed {
        if let Some(k) = basis.vars.index(name) {
            fixed[k] = Some(v.clone());
        }
    }
    let ctx = Ctx {
        positive: names.iter().map(|v| opts.positive.contains(v)).collect(),
        names,
        levels,
        fixed,
        zero_dim: verdict.zero_dimensional,
        bits: if opts.refine_bits == 0 { 256 } else { opts.refine_bits },
    };

    let mut exact = vec![Branch {
        vals: vec![None; n],
        param: None,
        rel: None,
    }];
    let mut approx: Vec<ApproxBranch> = Vec::new();
    for k in (0..n).rev() {
        let mut next = Vec::new();
        for b in exact {
            for e in ctx.extend_exact(k, b)? {
                match e {
                    Extension::Exact(b) => next.push(b),
                    Extension::Approx(a) => approx.push(a),
                    Extension::Positivity => out.discarded_positivity += 1,
                    Extension::Fixed => out.discarded_fixed += 1,
                }
            }
        }
        exact = next;
        let mut next_approx = Vec::new();
        for a in approx {
            // branches created at this level already hold a value for k
            if a.coords[k].is_some() {
                next_approx.push(a);
                continue;
            }
            match ctx.extend_approx(k, a)? {
                Extension::Approx(a) => next_approx.push(a),
                Extension::Positivity => out.discarded_positivity += 1,
                Extension::Fixed => out.discarded_fixed += 1,
                Extension::Exact(_) => unreachable!(),
            }
        }
        approx = next_approx;
    }

    for b in exact {
        let vals: Vec<ParamRingElem> = b.vals.into_iter().map(|v| v.unwrap()).collect();
        match b.param {
            None => {
                let values = vals.iter().map(|v| Coord::Exact(as_constant(v).unwrap())).collect();
                out.solutions.push(Solution::Point(SolutionPoint {
                    vars: ctx.names.clone(),
                    values,
                    residual_bound: Rational::zero(),
                }));
            }
            Some(p) => {
                let fam = SolutionFamily::new(ctx.names[p].clone(), b.rel, ctx.names.clone(), vals);
                let dup = out.families().any(|f| f.same_as(&fam));
                if !dup {
                    out.solutions.push(Solution::Family(fam));
                }
            }
        }
    }
    for a in approx {
        let values: Vec<Coord> = a.coords.into_iter().map(|c| c.unwrap()).collect();
        let bound = interval_residual(&basis.to_system(), &values, ctx.bits)?;
        out.solutions.push(Solution::Point(SolutionPoint {
            vars: ctx.names.clone(),
            values,
            residual_bound: bound,
        }));
    }
    sort_solutions(&mut out.solutions);
    Ok(out)
}

/// Canonical order: points by their numeric coordinates, then families by
/// their serialised values.
pub fn sort_solutions(sols: &mut [Solution]) {
    sols.sort_by(|a, b| match (a, b) {
        (Solution::Point(p), Solution::Point(q)) => {
            let x: Vec<f64> = p.values.iter().map(Coord::to_f64).collect();
            let y: Vec<f64> = q.values.iter().map(Coord::to_f64).collect();
            x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
        }
        (Solution::Point(_), Solution::Family(_)) => std::cmp::Ordering::Less,
        (Solution::Family(_), Solution::Point(_)) => std::cmp::Ordering::Greater,
        (Solution::Family(f), Solution::Family(g)) => {
            let key = |f: &SolutionFamily| f.values.iter().map(|v| v.to_string()).collect::<Vec<_>>();
            key(f).cmp(&key(g))
        }
    });
}

impl Ctx<'_> {
    fn specialize(&self, k: usize, vals: &[Option<ParamRingElem>]) -> Result<Vec<Vec<ParamRingElem>>, SolverError> {
        let mut out = Vec::new();
        for g in &self.levels[k] {
            let s = g
                .specialize::<ParamRingElem>(vals)
                .map_err(|e| SolverError::Poly(e.to_string()))?;
            let mut c = s.univariate_coeffs(k).ok_or_else(|| SolverError::Unsupported {
                var: self.names[k].clone(),
                why: "specialisation left other variables".into(),
            })?;
            while c.last().is_some_and(|x| x.is_zero()) {
                c.pop();
            }
            out.push(c);
        }
        Ok(out)
    }

    fn accept(&self, k: usize, v: &ParamRingElem) -> Option<Extension> {
        if self.positive[k] {
            let positive = match as_constant(v) {
                Some(c) => c.sign() == Sign::Positive,
                // family values are checked at the centre of the domain
                None => v.eval_f64(0.0, 1.0) > 0.0,
            };
            if !positive {
                return Some(Extension::Positivity);
            }
        }
        if let Some(f) = &self.fixed[k] {
            if as_constant(v).as_ref() != Some(f) {
                return Some(Extension::Fixed);
            }
        }
        None
    }

    fn extend_exact(&self, k: usize, b: Branch) -> Result<Vec<Extension>, SolverError> {
        let var = &self.names[k];
        let specs: Vec<Vec<ParamRingElem>> = self
            .specialize(k, &b.vals)?
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();

        if specs.is_empty() {
            if self.zero_dim || b.param.is_some() {
                return Err(SolverError::AmbiguousSpecialization(var.clone()));
            }
            let mut nb = b;
            nb.vals[k] = Some(param_t(nb.rel.as_ref()));
            nb.param = Some(k);
            return Ok(vec![Extension::Exact(nb)]);
        }
        if specs.iter().any(|c| c.len() == 1) {
            // a nonzero constant: the branch does not extend
            return Ok(Vec::new());
        }

        let constant: Option<Vec<UPoly<RadicalScalar>>> = specs
            .iter()
            .map(|c| c.iter().map(as_constant).collect::<Option<Vec<_>>>().map(UPoly::new))
            .collect();
        if let Some(polys) = constant {
            let mut g = polys[0].clone();
            for p in &polys[1..] {
                g = g.gcd(p);
            }
            if g.degree().unwrap_or(0) == 0 {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for root in isolate_real_roots(&g)? {
                match recognize_radical(&root) {
                    Some(x) => {
                        let v = ParamRingElem::constant(x);
                        if let Some(rej) = self.accept(k, &v) {
                            out.push(rej);
                            continue;
                        }
                        let mut nb = b.clone();
                        nb.vals[k] = Some(v);
                        out.push(Extension::Exact(nb));
                    }
                    None => {
                        if b.param.is_some() {
                            return Err(SolverError::Unsupported {
                                var: var.clone(),
                                why: "unrecognised root inside a family".into(),
                            });
                        }
                        out.push(self.start_approx(k, &b, root));
                    }
                }
            }
            return Ok(out);
        }

        // parameter-dependent coefficients
        let pick = specs
            .iter()
            .filter(|c| as_constant(c.last().unwrap()).is_some())
            .min_by_key(|c| c.len())
            .ok_or_else(|| SolverError::Unsupported {
                var: var.clone(),
                why: "leading coefficients depend on the parameter".into(),
            })?;
        let mut rel = b.rel.clone();
        let lc_inv = as_constant(pick.last().unwrap()).unwrap().inverse().unwrap();
        let cands: Vec<ParamRingElem> = match pick.len() - 1 {
            1 => vec![scale_const(&-pick[0].clone(), &lc_inv)],
            2 => {
                let (c0, c1, c2) = (&pick[0], &pick[1], &pick[2]);
                let four = ParamRingElem::constant(RadicalScalar::from(4));
                let disc = c1.clone() * c1.clone() - four * c2.clone() * c0.clone();
                let half = lc_inv * RadicalScalar::from(Rational::new(1, 2));
                if disc.is_zero() {
                    vec![scale_const(&-c1.clone(), &half)]
                } else {
                    let sq = sqrt_in_ring(&disc, rel.as_ref()).ok_or_else(|| SolverError::Unsupported {
                        var: var.clone(),
                        why: format!("discriminant {disc} has no square root in the parameter ring"),
                    })?;
                    let fresh = sq.new_relation.is_some();
                    if let Some(r) = sq.new_relation {
                        rel = Some(r);
                    }
                    let c1 = match &rel {
                        Some(r) => c1.clone().with_relation(r),
                        None => c1.clone(),
                    };
                    let plus = scale_const(&(-c1.clone() + sq.root.clone()), &half);
                    if fresh {
                        // -s is covered by s ranging over both signs
                        vec![plus]
                    } else {
                        vec![plus, scale_const(&(-c1 - sq.root), &half)]
                    }
                }
            }
            d => {
                return Err(SolverError::Unsupported {
                    var: var.clone(),
                    why: format!("degree {d} with parameter-dependent coefficients"),
                })
            }
        };
        let mut out = Vec::new();
        for v in cands {
            let specs_rel: Vec<Vec<ParamRingElem>> = match &rel {
                Some(r) => specs
                    .iter()
                    .map(|c| c.iter().map(|x| x.clone().with_relation(r)).collect())
                    .collect(),
                None => specs.clone(),
            };
            if !specs_rel.iter().all(|c| eval_coeffs(c, &v).is_zero()) {
                continue;
            }
            if let Some(rej) = self.accept(k, &v) {
                out.push(rej);
                continue;
            }
            let mut nb = b.clone();
            if let Some(r) = &rel {
                nb.vals = nb.vals.into_iter().map(|x| x.map(|x| x.with_relation(r))).collect();
            }
            nb.rel = rel.clone();
            nb.vals[k] = Some(v);
            out.push(Extension::Exact(nb));
        }
        Ok(out)
    }

    fn start_approx(&self, k: usize, b: &Branch, mut root: IsolatedRoot<RadicalScalar>) -> Extension {
        root.refine_to(self.bits);
        let iv = RatInterval::new(root.lo.clone(), root.hi.clone());
        if self.positive[k] && iv.sign() != Some(Sign::Positive) {
            return Extension::Positivity;
        }
        if self.fixed[k].is_some() {
            return Extension::Fixed;
        }
        let mut coords: Vec<Option<Coord>> = b
            .vals
            .iter()
            .map(|v| v.as_ref().map(|v| Coord::Exact(as_constant(v).unwrap())))
            .collect();
        coords[k] = Some(Coord::Root(root));
        Extension::Approx(ApproxBranch { coords })
    }

    fn extend_approx(&self, k: usize, a: ApproxBranch) -> Result<Extension, SolverError> {
        let var = &self.names[k];
        let vals: Vec<Option<RatInterval>> = a
            .coords
            .iter()
            .map(|c| c.as_ref().map(|c| c.interval(self.bits)))
            .collect();
        let mut best: Option<Vec<RatInterval>> = None;
        for g in &self.levels[k] {
            let s = g
                .specialize::<RatInterval>(&vals)
                .map_err(|e| SolverError::Poly(e.to_string()))?;
            let Some(c) = s.univariate_coeffs(k) else { continue };
            if c.len() == 2 && !c[1].contains_zero() {
                best = Some(c);
                break;
            }
        }
        let c = best.ok_or_else(|| SolverError::Unsupported {
            var: var.clone(),
            why: "no linear specialisation after an unrecognised root".into(),
        })?;
        let v = -(c[0].clone() * c[1].recip().unwrap());
        if self.positive[k] && v.sign() != Some(Sign::Positive) {
            return Ok(Extension::Positivity);
        }
        if self.fixed[k].is_some() {
            return Ok(Extension::Fixed);
        }
        let mut a = a;
        a.coords[k] = Some(Coord::Enclosed(v));
        Ok(Extension::Approx(a))
    }
}

/// Largest magnitude of the interval evaluations of the system at the point.
pub fn interval_residual(system: &PolySystem, values: &[Coord], bits: u32) -> Result<Rational, SolverError> {
    let iv: Vec<RatInterval> = values.iter().map(|c| c.interval(bits)).collect();
    let mut worst = Rational::zero();
    for p in &system.polys {
        let r = p.eval(&iv).map_err(|e| SolverError::Poly(e.to_string()))?;
        if !r.contains_zero() {
            return Err(SolverError::Poly(format!(
                "residual interval {r} excludes zero for {p}"
            )));
        }
        let m = r.magnitude();
        if m > worst {
            worst = m;
        }
    }
    Ok(worst)
}

/// Exact residuals of an exact point against a system.
pub fn exact_residuals(
    system: &PolySystem,
    point: &[(String, RadicalScalar)],
) -> Result<Vec<RadicalScalar>, SolverError> {
    let mut vals = Vec::with_capacity(system.vars.len());
    for name in system.vars.names() {
        let v = point
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| SolverError::Unassigned(name.clone()))?;
        vals.push(v);
    }
    system
        .polys
        .iter()
        .map(|p| p.eval(&vals).map_err(|e| SolverError::Poly(e.to_string())))
        .collect()
}

/// `true` if every residual is exactly zero.
pub fn point_satisfies(system: &PolySystem, point: &[(String, RadicalScalar)]) -> Result<bool, SolverError> {
    Ok(exact_residuals(system, point)?.iter().all(|r| r.is_zero()))
}

impl SolutionPoint {
    /// Named exact values, if the point is exact.
    pub fn named_exact(&self) -> Option<Vec<(String, RadicalScalar)>> {
        let vals = self.exact_values()?;
        Some(self.vars.iter().cloned().zip(vals).collect())
    }
}
