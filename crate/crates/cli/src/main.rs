use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bsz2d::lex::{build_lex_system, build_revlex_system};
use bsz2d::recurrence::{
    lex_blocks, lex_invariants, lex_pattern, revlex_blocks, snapped, total_blocks, total_invariants,
    total_pattern, StructureReport,
};
use bsz2d::szego::ceil_half;
use bsz2d::total::build_total_system;
use bsz2d::{verify_weight, ExampleId, MomentKind, MomentOracle, WeightSpec};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bsz2d", version, about = "Bernstein-Szego orthogonal polynomials on [-1,1]^2")]
struct Cli {
    /// Quadrature tolerance for every moment computation.
    #[arg(long, global = true, default_value_t = bsz2d::DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for quadrature (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Total,
    Lex,
    Revlex,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Monomial,
    Chebu,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    Ex1,
    Ex2,
    Ex4,
    RemarkN4,
}

#[derive(Subcommand)]
enum Cmd {
    /// Moment table as CSV.
    Moments {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "monomial")]
        kind: KindArg,
    },
    /// Total-degree system up to degree n as JSON.
    Total {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Lex (or revlex) system on [0,n] x [0,m] as JSON.
    Lex {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        revlex: bool,
    },
    /// Recurrence blocks as CSV, structure verdict as JSON.
    Recurrence {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, value_enum, default_value = "total")]
        ordering: OrderingArg,
        #[arg(long)]
        n: usize,
        /// Window width (lex: y-degree bound, revlex: x-degree bound).
        #[arg(long)]
        m: Option<usize>,
        /// Where to write the verdict (stderr otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Regression run for a worked example.
    Example {
        #[arg(long, value_enum)]
        id: ExampleArg,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, default_value_t = -0.3, allow_hyphen_values = true)]
        a2: f64,
        #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
        b1: f64,
        #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
        b2: f64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Full invariant suite for a weight.
    Verify {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Exit 2: bad input. Exit 1: a check failed or a construction broke down.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<bsz2d::Error> for Failure {
    fn from(e: bsz2d::Error) -> Self {
        Failure::Check(e.into())
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn load_weight(path: &Path) -> Result<WeightSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    WeightSpec::from_json(&text)
        .with_context(|| format!("invalid weight config {}", path.display()))
        .map_err(usage)
}

fn csv(out: &mut String, title: &str, rows: &[Vec<f64>]) {
    let _ = writeln!(out, "# {title}");
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize, to_stdout: bool) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(usage)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n")
            .with_context(|| format!("writing {}", p.display()))
            .map_err(usage),
        None if to_stdout => {
            emit(&(text + "\n"));
            Ok(())
        }
        None => {
            eprintln!("{text}");
            Ok(())
        }
    }
}

fn verdict(passed: bool, what: &str) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(anyhow::anyhow!("{what} failed")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage(anyhow::anyhow!("--tol must lie in (0, 1)")));
    }
    match cli.cmd {
        Cmd::Moments { weight, max_degree, kind } => {
            let spec = load_weight(&weight)?;
            let kind = match kind {
                KindArg::Monomial => MomentKind::Monomial,
                KindArg::Chebu => MomentKind::ChebU,
            };
            let t = MomentOracle::global().table(&spec, kind, max_degree, tol)?;
            let mut out = String::new();
            let header: Vec<String> = (0..=max_degree).map(|j| format!("j={j}")).collect();
            let _ = writeln!(out, "i,{}", header.join(","));
            for i in 0..=max_degree {
                let row: Vec<String> = (0..=max_degree).map(|j| format!("{:e}", t.get(i, j))).collect();
                let _ = writeln!(out, "{i},{}", row.join(","));
            }
            emit(&out);
        }
        Cmd::Total { weight, n } => {
            let spec = load_weight(&weight)?;
            write_json(None, &build_total_system(&spec, n, tol)?, true)?;
        }
        Cmd::Lex { weight, n, m, revlex } => {
            let spec = load_weight(&weight)?;
            let sys = if revlex {
                build_revlex_system(&spec, n, m, tol)?
            } else {
                build_lex_system(&spec, n, m, tol)?
            };
            write_json(None, &sys, true)?;
        }
        Cmd::Recurrence { weight, ordering, n, m, report } => {
            let spec = load_weight(&weight)?;
            let mut out = String::new();
            let rep: StructureReport = match ordering {
                OrderingArg::Total => {
                    let b = total_blocks(&spec, n, tol)?;
                    for (name, mat) in [("A_x", &b.a_x), ("B_x", &b.b_x), ("A_y", &b.a_y), ("B_y", &b.b_y)] {
                        csv(&mut out, &format!("{name} n={n}"), &snapped(mat));
                    }
                    let mut r = total_invariants(&b);
                    if n as i64 >= ceil_half(spec.n_h() as i64 - 1) {
                        r.merge(total_pattern(&spec, &b));
                    }
                    r
                }
                OrderingArg::Lex | OrderingArg::Revlex => {
                    let m = m.ok_or_else(|| usage(anyhow::anyhow!("--m is required for lex orderings")))?;
                    let b = match ordering {
                        OrderingArg::Lex => lex_blocks(&spec, n, m, tol)?,
                        _ => revlex_blocks(&spec, n, m, tol)?,
                    };
                    csv(&mut out, &format!("A level={n} width={m}"), &snapped(&b.a));
                    csv(&mut out, &format!("B level={n} width={m}"), &snapped(&b.b));
                    let mut r = lex_invariants(&b);
                    if n as i64 >= ceil_half(spec.n_h() as i64 + 1) {
                        r.merge(lex_pattern(&spec, &b));
                    }
                    r
                }
            };
            emit(&out);
            write_json(report.as_deref(), &rep, false)?;
            verdict(rep.passed, "structure check")?;
        }
        Cmd::Example { id, a, b, a1, a2, b1, b2, depth, report } => {
            let id = match id {
                ExampleArg::Ex1 => ExampleId::Ex1 { a },
                ExampleArg::Ex2 => ExampleId::Ex2 { a, b },
                ExampleArg::Ex4 => ExampleId::Ex4 { a1, a2 },
                ExampleArg::RemarkN4 => ExampleId::RemarkN4 { b1, b2, a },
            };
            id.spec().map_err(usage)?;
            if depth > bsz2d::examples::MAX_DEPTH {
                return Err(usage(anyhow::anyhow!("--depth must be at most {}", bsz2d::examples::MAX_DEPTH)));
            }
            let rep = bsz2d::examples::run_regression_tol(id, depth, tol);
            write_json(report.as_deref(), &rep, true)?;
            verdict(rep.passed, "regression")?;
        }
        Cmd::Verify { weight, depth, report } => {
            let spec = load_weight(&weight)?;
            let rep = verify_weight(&spec, depth, tol);
            write_json(report.as_deref(), &rep, true)?;
            verdict(rep.passed, "verification")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let cache = std::env::var_os("BSZ2D_CACHE_DIR").map(PathBuf::from);
    if let Some(dir) = &cache {
        if let Err(e) = MomentOracle::global().load_dir(dir) {
            eprintln!("warning: cache not loaded: {e}");
        }
    }
    let result = run(cli);
    if let Some(dir) = &cache {
        if let Err(e) = MomentOracle::global().save_dir(dir) {
            eprintln!("warning: cache not saved: {e}");
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
