use std::fmt::Write as _;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::text::parse_poly_at_line;
use super::{MonomialOrder, Poly, PolyError, SyntaxError, VarTable};
use crate::exactnum::Rational;

/// A list of polynomials over one variable table plus provenance metadata.
///
/// File format:
///
/// ```text
/// vars: A B C D E F X Y Z MU
/// order: lex
/// # case: z2xz2
/// # note: free text
/// A*B*C*D*E*F - 1
/// ...
/// ```
///
/// `order:` is optional (default `lex`); any other `#` line is a comment.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub vars: Arc<VarTable>,
    pub order: MonomialOrder,
    pub polys: Vec<Poly<Rational>>,
    pub case: String,
    pub note: String,
    /// Extra `# key: value` lines preserved verbatim (e.g. basis statistics).
    pub extra: Vec<(String, String)>,
}

impl PolySystem {
    pub fn new(vars: Arc<VarTable>, order: MonomialOrder, polys: Vec<Poly<Rational>>) -> Self {
        PolySystem {
            vars,
            order,
            polys,
            case: String::new(),
            note: String::new(),
            extra: Vec::new(),
        }
    }

    pub fn with_meta(mut self, case: &str, note: &str) -> Self {
        self.case = case.to_string();
        self.note = note.to_string();
        self
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn max_total_degree(&self) -> u32 {
        self.polys.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0)
    }

    /// Same system re-sorted under another order (explicit, never implicit).
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        let mut out = self.clone();
        out.order = order;
        out.polys = self.polys.iter().map(|p| p.with_order(order)).collect();
        out
    }

    /// Same system over a permutation of its variables.
    pub fn with_var_order<S: AsRef<str>>(&self, names: &[S]) -> Result<Self, PolyError> {
        let vars = VarTable::new(names)?;
        if vars.len() != self.vars.len() {
            return Err(PolyError::AssignmentLength {
                expected: self.vars.len(),
                got: vars.len(),
            });
        }
        for n in self.vars.names() {
            vars.require(n)?;
        }
        let polys = self
            .polys
            .iter()
            .map(|p| p.rename_into(&vars, self.order))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = self.clone();
        out.vars = vars;
        out.polys = polys;
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "vars: {}", self.vars.names().join(" ")).unwrap();
        writeln!(s, "order: {}", self.order).unwrap();
        if !self.case.is_empty() {
            writeln!(s, "# case: {}", self.case).unwrap();
        }
        if !self.note.is_empty() {
            writeln!(s, "# note: {}", self.note).unwrap();
        }
        for (k, v) in &self.extra {
            writeln!(s, "# {k}: {v}").unwrap();
        }
        for p in &self.polys {
            writeln!(s, "{p}").unwrap();
        }
        s
    }

    /// SHA-256 of the canonical text of the polynomials (metadata excluded).
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.vars.names().join(" ").as_bytes());
        h.update(b"\n");
        h.update(self.order.name().as_bytes());
        for p in &self.polys {
            h.update(b"\n");
            h.update(p.to_string().as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut vars: Option<Arc<VarTable>> = None;
        let mut order = MonomialOrder::Lex;
        let mut pending: Vec<(usize, &str)> = Vec::new();
        let mut case = String::new();
        let mut note = String::new();
        let mut extra = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let lineno = k + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let c = c.trim();
                if let Some(v) = c.strip_prefix("case:") {
                    case = v.trim().to_string();
                } else if let Some(v) = c.strip_prefix("note:") {
                    note = v.trim().to_string();
                } else if let Some((key, v)) = c.split_once(':') {
                    let key = key.trim();
                    if !key.is_empty() && key.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                        extra.push((key.to_string(), v.trim().to_string()));
                    }
                }
                continue;
            }
            if let Some(v) = line.strip_prefix("vars:") {
                if vars.is_some() {
                    return Err(SyntaxError::new(lineno, 1, "duplicate vars: header"));
                }
                let names: Vec<&str> = v.split_whitespace().collect();
                vars = Some(VarTable::new(&names).map_err(|e| SyntaxError::new(lineno, 1, e.to_string()))?);
                continue;
            }
            if let Some(v) = line.strip_prefix("order:") {
                order = v.parse().map_err(|e: String| SyntaxError::new(lineno, 1, e))?;
                continue;
            }
            if vars.is_none() {
                return Err(SyntaxError::new(lineno, 1, "polynomial before vars: header"));
            }
            pending.push((lineno, raw));
        }
        let vars = vars.ok_or_else(|| SyntaxError::new(1, 1, "missing vars: header"))?;
        let mut polys = Vec::with_capacity(pending.len());
        for (lineno, src) in pending {
            polys.push(parse_poly_at_line(src, &vars, order, lineno)?);
        }
        Ok(PolySystem {
            vars,
            order,
            polys,
            case,
            note,
            extra,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "vars: x y\norder: grevlex\n# case: toy\n# a comment line\nx^2 - 1\n\ny - x\n";

    #[test]
    fn parse_and_print() {
        let s = PolySystem::parse(SAMPLE).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.case, "toy");
        assert_eq!(s.order, MonomialOrder::Grevlex);
        let text = s.to_text();
        assert_eq!(text, "vars: x y\norder: grevlex\n# case: toy\nx^2 - 1\n-x + y\n");
        assert_eq!(PolySystem::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn errors_report_line() {
        let e = PolySystem::parse("vars: x\nx +\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = PolySystem::parse("x - 1\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(PolySystem::parse("vars: x x\n").is_err());
        assert!(PolySystem::parse("vars: x\norder: weird\n").is_err());
    }

    #[test]
    fn var_reordering() {
        let s = PolySystem::parse(SAMPLE).unwrap();
        let r = s.with_var_order(&["y", "x"]).unwrap();
        assert_eq!(r.vars.names(), &["y".to_string(), "x".to_string()]);
        assert_eq!(r.polys[1].to_string(), "y - x");
        assert!(s.with_var_order(&["y", "z"]).is_err());
    }
}
