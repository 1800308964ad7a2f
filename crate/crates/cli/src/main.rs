use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use einstein_core::pipeline::{self, SolveConfig, Status};
use einstein_core::poly::{MonomialOrder, PolySystem};
use einstein_core::varsys::MetricChart;

#[derive(Parser)]
#[command(
    name = "s3einstein",
    version,
    about = "Einstein metrics on S3 x S3 via Groebner bases"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the polynomial system of a symmetry case.
    Derive {
        /// trace2, z2xz2, z2, general or z2-mu=<value> (e.g. z2-mu=-5/(3*sqrt3))
        #[arg(long)]
        case: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Groebner basis, finiteness test, real solutions and certification.
    Solve {
        /// System file; derived from --case when omitted.
        system: Option<PathBuf>,
        #[arg(long)]
        case: Option<String>,
        #[arg(long, default_value = "lex")]
        order: String,
        /// Comma-separated variable order, largest first.
        #[arg(long, value_delimiter = ',')]
        var_order: Option<Vec<String>>,
        #[arg(long)]
        budget_pairs: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Interior samples per family branch.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Solution file to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Basis (or partial basis) file to write.
        #[arg(long)]
        basis_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Re-check a solution file against a system.
    Verify {
        solutions: PathBuf,
        /// System file; derived from --case when omitted.
        system: Option<PathBuf>,
        #[arg(long)]
        case: Option<String>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

/// Error that maps to the input-error exit code.
struct InputError(anyhow::Error);

fn input<T>(r: Result<T>) -> std::result::Result<T, InputError> {
    r.map_err(InputError)
}

fn parse_case(case: &str) -> Result<MetricChart> {
    MetricChart::parse_case(case).map_err(|e| anyhow!("{e}"))
}

fn load_system(path: Option<&Path>, case: Option<&MetricChart>) -> Result<PolySystem> {
    match (path, case) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            PolySystem::parse(&text).map_err(|e| anyhow!("{}: {e}", p.display()))
        }
        (None, Some(c)) => Ok(pipeline::derive_system(c)),
        (None, None) => Err(anyhow!("give a system file or --case")),
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> std::result::Result<Status, InputError> {
    match cli.cmd {
        Cmd::Derive { case, out } => {
            let chart = input(parse_case(&case))?;
            let d = pipeline::derive(&chart);
            let text = d.system.to_text();
            match &out {
                Some(p) => input(write_out(p, &text))?,
                None => print!("{text}"),
            }
            eprintln!("{}: {} polynomials", chart, d.system.polys.len());
            match d.fixture_match {
                Some(m) => {
                    eprint!("fixture: {m}");
                    Ok(if m.is_full_match() {
                        Status::Ok
                    } else {
                        Status::VerifyFailure
                    })
                }
                None => Ok(Status::Ok),
            }
        }
        Cmd::Solve {
            system,
            case,
            order,
            var_order,
            budget_pairs,
            budget_seconds,
            samples,
            out,
            basis_out,
            format,
        } => {
            let chart = input(case.as_deref().map(parse_case).transpose())?;
            let sys = input(load_system(system.as_deref(), chart.as_ref()))?;
            let order: MonomialOrder = input(order.parse().map_err(|e: String| anyhow!(e)))?;
            let cfg = SolveConfig {
                order,
                var_order,
                budget_pairs,
                budget_seconds,
                samples,
                case: chart,
            };
            let start = Instant::now();
            let run = input(pipeline::solve(&sys, &cfg).map_err(|e| anyhow!(e)))?;
            eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
            if let Some(p) = &run.partial {
                print!("{}", p.report());
                if let Some(path) = &basis_out {
                    let partial = PolySystem::new(p.vars.clone(), p.order, p.polys.clone());
                    input(write_out(path, &partial.to_text()))?;
                }
                return Ok(run.status);
            }
            let basis = run.basis.as_ref().expect("basis on success");
            if let Some(path) = &basis_out {
                input(write_out(path, &basis.to_text(false)))?;
            }
            let v = run.verdict.as_ref().unwrap();
            println!(
                "# basis: {} polynomials, {} order, {}",
                basis.polys.len(),
                basis.order,
                if v.zero_dimensional {
                    "zero-dimensional".to_string()
                } else {
                    format!("positive-dimensional (no pure power of {})", v.missing_vars.join(", "))
                }
            );
            if let Some(o) = &run.outcome {
                println!(
                    "# solutions: {}, discarded by positivity: {}, by fixed values: {}",
                    o.solutions.len(),
                    o.discarded_positivity,
                    o.discarded_fixed
                );
                match format {
                    Format::Table => print!("{}", pipeline::render_table(&run.file.records, &run.reports)),
                    Format::Records => print!("{}", pipeline::render_records(&run.file)),
                }
                for r in run.reports.iter().filter(|r| !r.is_ok()) {
                    eprintln!("{r}");
                }
                if let Some(path) = &out {
                    input(write_out(path, &pipeline::render_records(&run.file)))?;
                }
            }
            Ok(run.status)
        }
        Cmd::Verify {
            solutions,
            system,
            case,
            samples,
        } => {
            let chart = input(case.as_deref().map(parse_case).transpose())?;
            let sys = input(load_system(system.as_deref(), chart.as_ref()))?;
            let text =
                input(std::fs::read_to_string(&solutions).with_context(|| format!("reading {}", solutions.display())))?;
            let run = input(pipeline::verify_text(&text, &sys, samples).map_err(|e| anyhow!(e)))?;
            for r in &run.reports {
                println!("{r}");
            }
            let ok = run.reports.iter().filter(|r| r.is_ok()).count();
            println!("# verified {ok}/{}", run.reports.len());
            Ok(run.status)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(cli) {
        Ok(s) => s,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            Status::InputError
        }
    };
    ExitCode::from(status.code() as u8)
}
