//! Independent certification of solutions: exact substitution into the
//! originating system, a numeric Einstein check through the curvature
//! oracle, and classification by curvature invariants.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{ParamRingElem, RadicalScalar, Rational, Sign};
use crate::liegeom::{curvature, BasisChange, LieGeomError};
use crate::poly::PolySystem;
use crate::solver::{
    exact_residuals, interval_residual, verify_family, Coord, Solution, SolutionFamily, SolutionPoint, SolutionRecord,
    SolverError,
};
use crate::varsys::{
    forward_diagonal, forward_point, inverse_diagonal, inverse_point, inverse_point_f64, offdiag_scale_index,
    MU_ORIGINAL, MU_TRANSFORMED, ORIGINAL_NAMES, TRANSFORMED_NAMES,
};

/// `‖R‖²` of the standard metric, from the curvature oracle at the
/// identity frame.
pub const R2_STANDARD: f64 = 1.5;
/// `‖R‖²` of the nearly Kähler metric, from the curvature oracle at the
/// point with diagonal `3^(1/4)/sqrt2, sqrt2/3^(1/4)` and `x = y = z =
/// 1/(sqrt2 3^(1/4))`.
pub const R2_NEARLY_KAHLER: f64 = 1.666666666667;
pub const S_STANDARD: f64 = 3.0;
/// `5/sqrt3`
pub const S_NEARLY_KAHLER: f64 = 2.886751345948129;

const CLASSIFY_REL_TOL: f64 = 1e-8;
const INTERVAL_RESIDUAL_TOL: f64 = 1e-20;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Geometry(#[from] LieGeomError),
    #[error("coordinate change failed: {0}")]
    Transform(String),
    #[error("{what} = {value:e} exceeds {tol:e}")]
    Threshold { what: String, value: f64, tol: f64 },
    #[error("exact residual of polynomial #{} is {residual}", .index + 1)]
    Residual { index: usize, residual: String },
    #[error("diagonal variable {0} is not positive")]
    NotPositive(String),
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Interior parameter samples per family branch (endpoints are added).
    pub samples: usize,
    pub ricci_tol: f64,
    pub volume_tol: f64,
    /// Tolerance for a claimed scalar curvature.
    pub claim_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            samples: 5,
            ricci_tol: 1e-9,
            volume_tol: 1e-12,
            claim_tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Standard,
    NearlyKahler,
    Unknown,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Standard => "standard",
            Label::NearlyKahler => "nearly_kahler",
            Label::Unknown => "unknown",
        })
    }
}

/// Numeric certificate of one metric.
#[derive(Clone, Debug)]
pub struct SampleCert {
    /// Family parameter and branch of `s`, if sampled from a family.
    pub t: Option<(f64, f64)>,
    pub params: BasisChange<f64>,
    pub mu: Option<f64>,
    pub lambda: f64,
    pub scalar: f64,
    pub ricci_residual: f64,
    pub volume_residual: f64,
    pub invariant_r2: f64,
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CLASSIFY_REL_TOL * b.abs().max(1.0)
}

/// Matches `(S, ‖R‖²)` against the two reference metrics.
pub fn classify(cert: &SampleCert) -> Label {
    if rel_close(cert.scalar, S_STANDARD) && rel_close(cert.invariant_r2, R2_STANDARD) {
        Label::Standard
    } else if rel_close(cert.scalar, S_NEARLY_KAHLER) && rel_close(cert.invariant_r2, R2_NEARLY_KAHLER) {
        Label::NearlyKahler
    } else {
        Label::Unknown
    }
}

/// Einstein check at one metric. With `mu` given, `λ = -μ/2`; otherwise
/// `λ = S/6`.
pub fn certify_params(
    params: &BasisChange<f64>,
    mu: Option<f64>,
    opts: &CertifyOptions,
) -> Result<SampleCert, VerifyError> {
    let rep = curvature(params)?;
    let lambda = mu.map_or(rep.scalar / 6.0, |m| -m / 2.0);
    let mut ricci_residual: f64 = 0.0;
    for (i, row) in rep.ricci.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { lambda } else { 0.0 };
            ricci_residual = ricci_residual.max((v - target).abs());
        }
    }
    let check = |what: &str, value: f64, tol: f64| {
        if value < tol {
            Ok(())
        } else {
            Err(VerifyError::Threshold {
                what: what.to_string(),
                value,
                tol,
            })
        }
    };
    check("max|Ric - lambda Id|", ricci_residual, opts.ricci_tol)?;
    check("|S - 6 lambda|", (rep.scalar - 6.0 * lambda).abs(), opts.ricci_tol)?;
    let volume_residual = (params.determinant() - 1.0).abs();
    check("|abcdef - 1|", volume_residual, opts.volume_tol)?;
    Ok(SampleCert {
        t: None,
        params: *params,
        mu,
        lambda,
        scalar: rep.scalar,
        ricci_residual,
        volume_residual,
        invariant_r2: rep.invariant_r2,
    })
}

fn is_transformed(vars: &[String]) -> bool {
    vars.iter().any(|v| TRANSFORMED_NAMES[..6].contains(&v.as_str()))
}

fn params_from(orig: &[(String, f64)]) -> (BasisChange<f64>, Option<f64>) {
    let mut p = BasisChange::from_array([0.0; 15]);
    let mut mu = None;
    for (name, v) in orig {
        if name == MU_ORIGINAL {
            mu = Some(*v);
        } else {
            p.set(name, *v);
        }
    }
    (p, mu)
}

fn to_original_f64(vars: &[String], vals: Vec<f64>) -> Result<Vec<(String, f64)>, VerifyError> {
    let named: Vec<(String, f64)> = vars.iter().cloned().zip(vals).collect();
    if is_transformed(vars) {
        inverse_point_f64(&named).ok_or_else(|| VerifyError::Transform("transformed diagonal not positive".into()))
    } else {
        Ok(named)
    }
}

/// Family parameter values spread over the domain: both endpoints plus
/// `k` interior points.
pub fn family_samples(fam: &SolutionFamily, k: usize) -> Vec<f64> {
    let (lo, hi) = match &fam.domain {
        Some((lo, hi)) => (lo.to_f64(), hi.to_f64()),
        None => (-1.0, 1.0),
    };
    let mut ts = vec![lo];
    for i in 1..=k {
        ts.push(lo + (hi - lo) * i as f64 / (k + 1) as f64);
    }
    ts.push(hi);
    ts
}

/// Numeric certification of a point or of a family sampled on both
/// branches of `s`.
pub fn certify_einstein(sol: &Solution, opts: &CertifyOptions) -> Result<Vec<SampleCert>, VerifyError> {
    match sol {
        Solution::Point(p) => {
            let orig = to_original_f64(&p.vars, p.values.iter().map(Coord::to_f64).collect())?;
            let (params, mu) = params_from(&orig);
            Ok(vec![certify_params(&params, mu, opts)?])
        }
        Solution::Family(f) => {
            let branches: &[f64] = if f.relation.is_some() { &[1.0, -1.0] } else { &[1.0] };
            let mut out = Vec::new();
            for &sb in branches {
                for t in family_samples(f, opts.samples) {
                    let Some(pt) = f.sample_f64(t, sb) else { continue };
                    let (vars, vals): (Vec<String>, Vec<f64>) = pt.into_iter().unzip();
                    let orig = to_original_f64(&vars, vals)?;
                    let (params, mu) = params_from(&orig);
                    let mut c = certify_params(&params, mu, opts)?;
                    c.t = Some((t, sb));
                    out.push(c);
                }
            }
            Ok(out)
        }
    }
}

fn diag_of(vals: &[(String, RadicalScalar)], names: &[&str]) -> Result<[RadicalScalar; 6], VerifyError> {
    let mut d: [RadicalScalar; 6] = Default::default();
    for (k, slot) in d.iter_mut().enumerate() {
        *slot = vals
            .iter()
            .find(|(n, _)| n == names[k])
            .map(|(_, v)| v.clone())
            .ok_or_else(|| VerifyError::Transform(format!("missing {}", names[k])))?;
    }
    Ok(d)
}

/// A family in the other coordinate chart; the diagonal must be constant.
pub fn convert_family(fam: &SolutionFamily, to_transformed: bool) -> Result<SolutionFamily, VerifyError> {
    let (from, to) = if to_transformed {
        (ORIGINAL_NAMES, TRANSFORMED_NAMES)
    } else {
        (TRANSFORMED_NAMES, ORIGINAL_NAMES)
    };
    let consts: Vec<(String, RadicalScalar)> = fam
        .vars
        .iter()
        .zip(&fam.values)
        .filter_map(|(n, v)| constant_of(v).map(|c| (n.clone(), c)))
        .collect();
    let d = diag_of(&consts, &from[..6])?;
    let image = if to_transformed {
        forward_diagonal(&d)
    } else {
        inverse_diagonal(&d)
    }
    .ok_or_else(|| VerifyError::Transform("diagonal leaves the radical field".into()))?;
    // off-diagonal k is multiplied by the original diagonal entry it scales with
    let orig_diag = if to_transformed { d.clone() } else { image.clone() };
    let mut vars = Vec::new();
    let mut values = Vec::new();
    let mut parameter = fam.parameter.clone();
    for (name, v) in fam.vars.iter().zip(&fam.values) {
        let (new_name, new_val) = if let Some(k) = from.iter().position(|n| n == name) {
            if k < 6 {
                (to[k].to_string(), ParamRingElem::constant(image[k].clone()))
            } else {
                let s = &orig_diag[offdiag_scale_index(k)];
                let factor = if to_transformed {
                    s.inverse()
                        .ok_or_else(|| VerifyError::Transform("zero diagonal".into()))?
                } else {
                    s.clone()
                };
                (to[k].to_string(), scale(v, &factor))
            }
        } else if name == MU_ORIGINAL || name == MU_TRANSFORMED {
            let n = if to_transformed { MU_TRANSFORMED } else { MU_ORIGINAL };
            (n.to_string(), v.clone())
        } else {
            return Err(VerifyError::Transform(format!("unknown variable {name}")));
        };
        if *name == fam.parameter {
            parameter = new_name.clone();
        }
        vars.push(new_name);
        values.push(new_val);
    }
    Ok(SolutionFamily::new(parameter, fam.relation.clone(), vars, values))
}

fn constant_of(v: &ParamRingElem) -> Option<RadicalScalar> {
    let mut it = v.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(RadicalScalar::zero()),
        (Some(((0, 0), c)), None) => Some(c.clone()),
        _ => None,
    }
}

fn scale(v: &ParamRingElem, k: &RadicalScalar) -> ParamRingElem {
    v.clone() * ParamRingElem::constant(k.clone())
}

fn point_in(p: &SolutionPoint, system: &PolySystem) -> Result<Vec<(String, RadicalScalar)>, VerifyError> {
    let named = p
        .named_exact()
        .ok_or_else(|| VerifyError::Transform("point has enclosed coordinates".into()))?;
    let want_transformed = is_transformed(system.vars.names());
    let have_transformed = is_transformed(&p.vars);
    let conv = match (have_transformed, want_transformed) {
        (false, true) => forward_point(&named),
        (true, false) => inverse_point(&named),
        _ => Some(named),
    };
    conv.ok_or_else(|| VerifyError::Transform("point leaves the radical field".into()))
}

/// Exact check of a record against a system.
pub fn exact_check(sol: &Solution, system: &PolySystem) -> Result<(), VerifyError> {
    match sol {
        Solution::Point(p) if p.is_exact() => {
            let pt = point_in(p, system)?;
            for n in ORIGINAL_NAMES[..6].iter().chain(&TRANSFORMED_NAMES[..6]) {
                if let Some((_, v)) = pt.iter().find(|(m, _)| m == n) {
                    if v.sign() != Sign::Positive {
                        return Err(VerifyError::NotPositive(n.to_string()));
                    }
                }
            }
            for (index, r) in exact_residuals(system, &pt)?.into_iter().enumerate() {
                if !r.is_zero() {
                    return Err(VerifyError::Residual {
                        index,
                        residual: r.to_string(),
                    });
                }
            }
            Ok(())
        }
        Solution::Point(p) => {
            if is_transformed(&p.vars) != is_transformed(system.vars.names()) {
                return Err(VerifyError::Transform(
                    "enclosed points are checked in their own chart".into(),
                ));
            }
            let mut values = Vec::new();
            for name in system.vars.names() {
                let c = p.value(name).ok_or_else(|| SolverError::Unassigned(name.clone()))?;
                values.push(c.clone());
            }
            let bound = interval_residual(system, &values, 256)?;
            let b = bound.to_f64();
            if b >= INTERVAL_RESIDUAL_TOL {
                return Err(VerifyError::Threshold {
                    what: "interval residual".into(),
                    value: b,
                    tol: INTERVAL_RESIDUAL_TOL,
                });
            }
            Ok(())
        }
        Solution::Family(f) => {
            let want_transformed = is_transformed(system.vars.names());
            let fam = if is_transformed(&f.vars) == want_transformed {
                f.clone()
            } else {
                convert_family(f, want_transformed)?
            };
            verify_family(&fam, system)?.into_result()?;
            Ok(())
        }
    }
}

/// Outcome of verifying one record.
#[derive(Debug)]
pub struct RecordReport {
    pub label: String,
    pub exact: Result<(), VerifyError>,
    pub certs: Result<Vec<SampleCert>, VerifyError>,
    /// Claimed scalar curvature check, if the record carries one.
    pub claim: Option<Result<(), VerifyError>>,
    pub class: Label,
}

impl RecordReport {
    pub fn is_ok(&self) -> bool {
        self.exact.is_ok() && self.certs.is_ok() && self.claim.as_ref().is_none_or(|c| c.is_ok())
    }

    pub fn scalar(&self) -> Option<f64> {
        self.certs.as_ref().ok().and_then(|c| c.first()).map(|c| c.scalar)
    }
}

impl fmt::Display for RecordReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.is_ok() { "ok" } else { "FAIL" };
        write!(f, "{} {status} class={}", self.label, self.class)?;
        if let Ok(c) = &self.certs {
            let worst = c.iter().map(|c| c.ricci_residual).fold(0.0, f64::max);
            if let Some(first) = c.first() {
                write!(
                    f,
                    " S={:.12} lambda={:.12} samples={} ricci_residual={worst:.1e}",
                    first.scalar,
                    first.lambda,
                    c.len()
                )?;
            }
        }
        if let Err(e) = &self.exact {
            write!(f, " exact: {e}")?;
        }
        if let Err(e) = &self.certs {
            write!(f, " numeric: {e}")?;
        }
        if let Some(Err(e)) = &self.claim {
            write!(f, " claim: {e}")?;
        }
        Ok(())
    }
}

pub fn verify_record(rec: &SolutionRecord, system: &PolySystem, opts: &CertifyOptions) -> RecordReport {
    let exact = exact_check(&rec.solution, system);
    let certs = certify_einstein(&rec.solution, opts);
    let class = match &certs {
        Ok(c) if !c.is_empty() => {
            let first = classify(&c[0]);
            if c.iter().all(|x| classify(x) == first) {
                first
            } else {
                Label::Unknown
            }
        }
        _ => Label::Unknown,
    };
    let claim = rec.claimed_s.as_ref().map(|s| {
        let claimed = s.to_f64();
        let exact_s = match &rec.solution {
            Solution::Point(p) => exact_lambda(p).map(|l| l * RadicalScalar::from(6)),
            Solution::Family(_) => None,
        };
        if let Some(e) = exact_s {
            if &e != s {
                return Err(VerifyError::Threshold {
                    what: format!("S = 6 lambda = {e} vs claimed {s}"),
                    value: (e.to_f64() - claimed).abs(),
                    tol: 0.0,
                });
            }
        }
        match &certs {
            Ok(c) => {
                let worst = c.iter().map(|x| (x.scalar - claimed).abs()).fold(0.0, f64::max);
                if worst < opts.claim_tol {
                    Ok(())
                } else {
                    Err(VerifyError::Threshold {
                        what: format!("|S - claimed {s}|"),
                        value: worst,
                        tol: opts.claim_tol,
                    })
                }
            }
            Err(_) => Ok(()),
        }
    });
    RecordReport {
        label: rec.label.clone(),
        exact,
        certs,
        claim,
        class,
    }
}

/// Exact value of `-μ/2` for a point carrying `μ`.
pub fn exact_lambda(p: &SolutionPoint) -> Option<RadicalScalar> {
    let mu = p
        .value(MU_ORIGINAL)
        .or_else(|| p.value(MU_TRANSFORMED))?
        .exact()?
        .clone();
    Some(mu * RadicalScalar::from(Rational::new(-1, 2)))
}
