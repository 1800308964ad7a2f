//! Solution files.
//!
//! ```text
//! # comment
//! system: <hash>
//! basis: <hash>
//! point 1
//!   A = 1/2*r2
//!   X = [-3/8, -1/4]
//!   residual: 0
//!   S: 3
//! end
//! family 2
//!   parameter: X
//!   rel: s^2 + t^2 - 1
//!   Y = t
//!   W = s
//!   residual: 0
//! end
//! ```
//!
//! Values use the exactnum text forms; `[lo, hi]` marks an enclosure. The
//! `S:` line is an optional claimed scalar curvature that verification
//! checks independently. Hash lines are optional provenance.

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::Zero;

use super::{Coord, RatInterval, Solution, SolutionFamily, SolutionPoint, SolverError};
use crate::exactnum::{parse_radical_expr, ParamRingElem, RadicalScalar, Rational, Relation};

#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub label: String,
    pub solution: Solution,
    pub claimed_s: Option<RadicalScalar>,
}

#[derive(Clone, Debug, Default)]
pub struct SolutionFile {
    pub system_hash: Option<String>,
    pub basis_hash: Option<String>,
    pub records: Vec<SolutionRecord>,
}

fn coord_text(c: &Coord) -> String {
    match c {
        Coord::Exact(x) => x.to_string(),
        Coord::Root(r) => format!("[{}, {}]", r.lo, r.hi),
        Coord::Enclosed(i) => format!("[{}, {}]", i.lo, i.hi),
    }
}

pub fn write_solutions(file: &SolutionFile) -> String {
    let mut out = String::new();
    if let Some(h) = &file.system_hash {
        writeln!(out, "system: {h}").unwrap();
    }
    if let Some(h) = &file.basis_hash {
        writeln!(out, "basis: {h}").unwrap();
    }
    for rec in &file.records {
        match &rec.solution {
            Solution::Point(p) => {
                writeln!(out, "point {}", rec.label).unwrap();
                for (v, c) in p.vars.iter().zip(&p.values) {
                    writeln!(out, "  {v} = {}", coord_text(c)).unwrap();
                }
                writeln!(out, "  residual: {}", p.residual_bound).unwrap();
            }
            Solution::Family(f) => {
                writeln!(out, "family {}", rec.label).unwrap();
                writeln!(out, "  parameter: {}", f.parameter).unwrap();
                if let Some(r) = &f.relation {
                    writeln!(out, "  {r}").unwrap();
                }
                for (v, c) in f.vars.iter().zip(&f.values) {
                    writeln!(out, "  {v} = {c}").unwrap();
                }
                writeln!(out, "  residual: 0").unwrap();
            }
        }
        if let Some(s) = &rec.claimed_s {
            writeln!(out, "  S: {s}").unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    out
}

fn parse_scalar(s: &str) -> Result<RadicalScalar, SolverError> {
    s.parse::<RadicalScalar>()
        .or_else(|_| parse_radical_expr(s))
        .map_err(|_| SolverError::Format(format!("bad scalar `{s}`")))
}

fn parse_coord(s: &str) -> Result<Coord, SolverError> {
    if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        let (lo, hi) = body
            .split_once(',')
            .ok_or_else(|| SolverError::Format(format!("bad interval `{s}`")))?;
        let q = |x: &str| {
            x.trim()
                .parse::<Rational>()
                .map_err(|_| SolverError::Format(format!("bad interval endpoint `{x}`")))
        };
        let (lo, hi) = (q(lo)?, q(hi)?);
        if lo > hi {
            return Err(SolverError::Format(format!("empty interval `{s}`")));
        }
        return Ok(Coord::Enclosed(RatInterval::new(lo, hi)));
    }
    Ok(Coord::Exact(parse_scalar(s)?))
}

struct Pending {
    family: bool,
    label: String,
    parameter: Option<String>,
    relation: Option<Arc<Relation>>,
    assigns: Vec<(String, String)>,
    residual: Option<Rational>,
    claimed_s: Option<RadicalScalar>,
}

impl Pending {
    fn finish(self, line: usize) -> Result<SolutionRecord, SolverError> {
        let err = |m: String| SolverError::Format(format!("line {line}: {m}"));
        let vars: Vec<String> = self.assigns.iter().map(|(v, _)| v.clone()).collect();
        let solution = if self.family {
            let parameter = self.parameter.ok_or_else(|| err("family without parameter".into()))?;
            let values = self
                .assigns
                .iter()
                .map(|(v, text)| {
                    ParamRingElem::parse(text, self.relation.clone()).map_err(|e| err(format!("value of {v}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Solution::Family(SolutionFamily::new(parameter, self.relation, vars, values))
        } else {
            let values = self
                .assigns
                .iter()
                .map(|(_, text)| parse_coord(text))
                .collect::<Result<Vec<_>, _>>()?;
            Solution::Point(SolutionPoint {
                vars,
                values,
                residual_bound: self.residual.unwrap_or_else(Rational::zero),
            })
        };
        Ok(SolutionRecord {
            label: self.label,
            solution,
            claimed_s: self.claimed_s,
        })
    }
}

pub fn parse_solutions(text: &str) -> Result<SolutionFile, SolverError> {
    let mut file = SolutionFile::default();
    let mut cur: Option<Pending> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let n = k + 1;
        let err = |m: &str| SolverError::Format(format!("line {n}: {m}"));
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "end" {
            let p = cur.take().ok_or_else(|| err("`end` outside a record"))?;
            file.records.push(p.finish(n)?);
            continue;
        }
        let Some(p) = cur.as_mut() else {
            if let Some(h) = line.strip_prefix("system:") {
                file.system_hash = Some(h.trim().to_string());
            } else if let Some(h) = line.strip_prefix("basis:") {
                file.basis_hash = Some(h.trim().to_string());
            } else if let Some((kind, label)) = line.split_once(' ') {
                let family = match kind {
                    "point" => false,
                    "family" => true,
                    _ => return Err(err(&format!("unknown record kind `{kind}`"))),
                };
                cur = Some(Pending {
                    family,
                    label: label.trim().to_string(),
                    parameter: None,
                    relation: None,
                    assigns: Vec::new(),
                    residual: None,
                    claimed_s: None,
                });
            } else {
                return Err(err(&format!("unexpected `{line}`")));
            }
            continue;
        };
        if let Some(v) = line.strip_prefix("parameter:") {
            p.parameter = Some(v.trim().to_string());
        } else if line.starts_with("rel:") {
            let r = Relation::parse(line).map_err(|e| err(&e.to_string()))?;
            p.relation = Some(Arc::new(r));
        } else if let Some(v) = line.strip_prefix("residual:") {
            p.residual = Some(v.trim().parse::<Rational>().map_err(|_| err("bad residual"))?);
        } else if let Some(v) = line.strip_prefix("S:") {
            p.claimed_s = Some(parse_scalar(v.trim())?);
        } else if let Some((var, val)) = line.split_once('=') {
            p.assigns.push((var.trim().to_string(), val.trim().to_string()));
        } else {
            return Err(err(&format!("unexpected `{line}`")));
        }
    }
    if cur.is_some() {
        return Err(SolverError::Format("unterminated record".into()));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "\
system: abc
point 1
  A = 1/2*r2
  X = [-3/8, -1/4]
  residual: 1/1000
  S: 5/3*r3q^2
end
family 2
  parameter: X
  rel: s^2 + t^2 - 1
  X = t
  W = s
  residual: 0
end
";
        let f = parse_solutions(text).unwrap();
        assert_eq!(f.records.len(), 2);
        let again = write_solutions(&f);
        let f2 = parse_solutions(&again).unwrap();
        assert_eq!(write_solutions(&f2), again);
        match &f.records[1].solution {
            Solution::Family(fam) => assert!(fam.relation.is_some()),
            _ => panic!("expected a family"),
        }
    }
}
