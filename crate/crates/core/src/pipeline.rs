//! End-to-end drivers behind the command-line tool: derive a system, solve
//! it (Groebner basis, finiteness test, back-substitution, certification),
//! and verify a solution file against a system.

use std::fmt::Write as _;

use crate::exactnum::{ParamRingElem, RadicalScalar};
use crate::fixtures;
use crate::groebner::{
    buchberger_with, finiteness_test, DimensionVerdict, GroebnerBasis, GroebnerError, GroebnerOptions, PartialBasis,
};
use crate::poly::{MonomialOrder, PolySystem};
use crate::solver::{
    back_substitute, parse_solutions, write_solutions, Coord, Solution, SolutionFile, SolutionRecord, SolveOptions,
    SolveOutcome,
};
use crate::varsys::{
    build_original_system, build_variational_system, inverse_point, inverse_point_f64, match_against_fixture,
    ChartKind, MatchReport, MetricChart, MU_ORIGINAL, MU_TRANSFORMED, ORIGINAL_NAMES, TRANSFORMED_NAMES,
};
use crate::verify::{convert_family, verify_record, CertifyOptions, Label, RecordReport};

/// Process exit status of a pipeline run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerifyFailure,
    BudgetExhausted,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerifyFailure => 2,
            Status::BudgetExhausted => 3,
            Status::InputError => 4,
        }
    }
}

/// The system for a case: original coordinates for trace2 (as tabulated),
/// transformed coordinates otherwise.
pub fn derive_system(chart: &MetricChart) -> PolySystem {
    match chart.kind {
        ChartKind::Trace2 => build_original_system(chart),
        _ => build_variational_system(chart),
    }
}

pub struct Derived {
    pub system: PolySystem,
    pub fixture_match: Option<MatchReport>,
}

pub fn derive(chart: &MetricChart) -> Derived {
    let system = derive_system(chart);
    let fixture_match = fixtures::system_for_case(&chart.case_name()).map(|text| {
        let fixture = PolySystem::parse(text).expect("shipped fixture parses");
        match_against_fixture(&system, &fixture)
    });
    Derived { system, fixture_match }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub order: MonomialOrder,
    pub var_order: Option<Vec<String>>,
    pub budget_pairs: Option<u64>,
    pub budget_seconds: Option<f64>,
    pub samples: usize,
    /// Overrides the case recorded in the system file.
    pub case: Option<MetricChart>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            order: MonomialOrder::Lex,
            var_order: None,
            budget_pairs: None,
            budget_seconds: None,
            samples: 5,
            case: None,
        }
    }
}

pub struct SolveRun {
    pub status: Status,
    pub basis: Option<GroebnerBasis>,
    pub partial: Option<PartialBasis>,
    pub verdict: Option<DimensionVerdict>,
    pub outcome: Option<SolveOutcome>,
    pub file: SolutionFile,
    pub reports: Vec<RecordReport>,
}

fn chart_of(system: &PolySystem, cfg: &SolveConfig) -> Option<MetricChart> {
    cfg.case.clone().or_else(|| MetricChart::parse_case(&system.case).ok())
}

/// Variable order for the run: explicit flag, else the chart's order when it
/// names exactly the system's variables, else the file's order.
fn run_order(system: &PolySystem, chart: Option<&MetricChart>, cfg: &SolveConfig) -> Option<Vec<String>> {
    if let Some(v) = &cfg.var_order {
        return Some(v.clone());
    }
    let names = chart?.order_vars(cfg.order);
    let mut a = names.clone();
    let mut b = system.vars.names().to_vec();
    a.sort();
    b.sort();
    (a == b).then_some(names)
}

pub fn solve(system: &PolySystem, cfg: &SolveConfig) -> Result<SolveRun, String> {
    let chart = chart_of(system, cfg);
    let sys = match run_order(system, chart.as_ref(), cfg) {
        Some(order) => system.with_var_order(&order).map_err(|e| e.to_string())?,
        None => system.clone(),
    };
    let mut opts = GroebnerOptions::default();
    if let Some(p) = cfg.budget_pairs {
        opts.max_pairs = p;
    }
    opts.max_seconds = cfg.budget_seconds;
    let mut run = SolveRun {
        status: Status::Ok,
        basis: None,
        partial: None,
        verdict: None,
        outcome: None,
        file: SolutionFile {
            system_hash: Some(system.content_hash()),
            ..Default::default()
        },
        reports: Vec::new(),
    };
    let basis = match buchberger_with(&sys, cfg.order, &opts) {
        Ok(b) => b,
        Err(GroebnerError::BudgetExceeded(p)) => {
            run.partial = Some(*p);
            run.status = Status::BudgetExhausted;
            return Ok(run);
        }
        Err(e) => return Err(e.to_string()),
    };
    run.verdict = Some(finiteness_test(&basis));
    run.file.basis_hash = Some(basis.content_hash());
    if cfg.order == MonomialOrder::Lex {
        let positive: Vec<String> = sys
            .vars
            .names()
            .iter()
            .filter(|v| ORIGINAL_NAMES[..6].contains(&v.as_str()) || TRANSFORMED_NAMES[..6].contains(&v.as_str()))
            .cloned()
            .collect();
        let mut sopts = SolveOptions {
            positive,
            ..Default::default()
        };
        if let Some(mu0) = chart.as_ref().and_then(|c| c.fixed_mu()) {
            for name in [MU_TRANSFORMED, MU_ORIGINAL] {
                if sys.vars.index(name).is_some() {
                    sopts.fixed.push((name.to_string(), mu0.clone()));
                }
            }
        }
        let outcome = back_substitute(&basis, &sopts).map_err(|e| e.to_string())?;
        let certify = CertifyOptions {
            samples: cfg.samples,
            ..Default::default()
        };
        for (k, sol) in outcome.solutions.iter().enumerate() {
            let rec = SolutionRecord {
                label: (k + 1).to_string(),
                solution: sol.clone(),
                claimed_s: exact_scalar(sol),
            };
            let rep = verify_record(&rec, system, &certify);
            if !rep.is_ok() {
                run.status = Status::VerifyFailure;
            }
            run.reports.push(rep);
            run.file.records.push(rec);
        }
        run.outcome = Some(outcome);
    }
    run.basis = Some(basis);
    Ok(run)
}

/// `S = 6 lambda = -3 mu`, exactly, when the solution fixes `mu`.
pub fn exact_scalar(sol: &Solution) -> Option<RadicalScalar> {
    let mu = match sol {
        Solution::Point(p) => p
            .value(MU_TRANSFORMED)
            .or_else(|| p.value(MU_ORIGINAL))?
            .exact()?
            .clone(),
        Solution::Family(f) => {
            let v = f.value(MU_TRANSFORMED).or_else(|| f.value(MU_ORIGINAL))?;
            constant(v)?
        }
    };
    Some(mu * RadicalScalar::from(-3))
}

fn constant(v: &ParamRingElem) -> Option<RadicalScalar> {
    let mut it = v.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(RadicalScalar::from(0)),
        (Some(((0, 0), c)), None) => Some(c.clone()),
        _ => None,
    }
}

pub struct VerifyRun {
    pub status: Status,
    pub reports: Vec<RecordReport>,
}

pub fn verify_text(solutions: &str, system: &PolySystem, samples: usize) -> Result<VerifyRun, String> {
    let file = parse_solutions(solutions).map_err(|e| e.to_string())?;
    let opts = CertifyOptions {
        samples,
        ..Default::default()
    };
    let reports: Vec<RecordReport> = file.records.iter().map(|r| verify_record(r, system, &opts)).collect();
    let status = if reports.iter().all(RecordReport::is_ok) && !reports.is_empty() {
        Status::Ok
    } else {
        Status::VerifyFailure
    };
    Ok(VerifyRun { status, reports })
}

/// Original-coordinate rendering of each value of a solution.
fn original_cells(sol: &Solution) -> Vec<(String, String)> {
    match sol {
        Solution::Point(p) => {
            let transformed = p.vars.iter().any(|v| TRANSFORMED_NAMES[..6].contains(&v.as_str()));
            if !transformed {
                return p.vars.iter().cloned().zip(p.values.iter().map(cell)).collect();
            }
            if let Some(exact) = p.named_exact() {
                if let Some(orig) = inverse_point(&exact) {
                    return orig.into_iter().map(|(n, v)| (n, v.to_string())).collect();
                }
            }
            let approx: Vec<(String, f64)> = p.to_f64();
            inverse_point_f64(&approx)
                .unwrap_or(approx)
                .into_iter()
                .map(|(n, v)| (n, format!("{v:.12}")))
                .collect()
        }
        Solution::Family(f) => {
            let transformed = f.vars.iter().any(|v| TRANSFORMED_NAMES[..6].contains(&v.as_str()));
            let fam = if transformed {
                convert_family(f, false).unwrap_or_else(|_| f.clone())
            } else {
                f.clone()
            };
            fam.vars
                .iter()
                .cloned()
                .zip(fam.values.iter().map(|v| v.to_string()))
                .collect()
        }
    }
}

fn cell(c: &Coord) -> String {
    match c {
        Coord::Exact(x) => x.to_string(),
        _ => format!("{:.12}", c.to_f64()),
    }
}

/// Table with the columns `a..f`, present off-diagonals, `mu`, `S`, class.
pub fn render_table(records: &[SolutionRecord], reports: &[RecordReport]) -> String {
    let rows: Vec<Vec<(String, String)>> = records.iter().map(|r| original_cells(&r.solution)).collect();
    let mut cols: Vec<&str> = Vec::new();
    for name in ORIGINAL_NAMES.iter().chain([&MU_ORIGINAL]) {
        if rows.iter().any(|r| r.iter().any(|(n, _)| n == name)) {
            cols.push(name);
        }
    }
    let mut header = vec!["#".to_string()];
    header.extend(cols.iter().map(|c| c.to_string()));
    header.extend(["S".to_string(), "class".to_string(), "status".to_string()]);
    let mut table = vec![header];
    for (k, (rec, row)) in records.iter().zip(&rows).enumerate() {
        let mut line = vec![rec.label.clone()];
        for c in &cols {
            line.push(
                row.iter()
                    .find(|(n, _)| n == c)
                    .map_or("0".to_string(), |(_, v)| v.clone()),
            );
        }
        let rep = reports.get(k);
        line.push(match (&rec.claimed_s, rep.and_then(|r| r.scalar())) {
            (Some(s), _) => s.to_string(),
            (None, Some(v)) => format!("{v:.12}"),
            (None, None) => "?".into(),
        });
        line.push(rep.map_or(Label::Unknown, |r| r.class).to_string());
        line.push(rep.map_or("-", |r| if r.is_ok() { "ok" } else { "FAIL" }).to_string());
        table.push(line);
    }
    let widths: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in table.iter().enumerate() {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", cells.join(" | ").trim_end()).unwrap();
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            writeln!(out, "{}", rule.join("-+-")).unwrap();
        }
    }
    out
}

/// Solution records as text (the solution-file format).
pub fn render_records(file: &SolutionFile) -> String {
    write_solutions(file)
}
