//! Command-line front-end: `spectrum`, `energy`, `vertex-energy`, `verify`.

pub mod args;
mod number;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::Parser;
use divisor_spectra::energy::{EnergyReport, Tolerance};
use divisor_spectra::graph::{build_direct, build_kronecker, DivisorGraph, Variant};
use divisor_spectra::linalg::{eigen_symmetric_capped, DEFAULT_DIM_CAP};
use divisor_spectra::verify::{parse_checks, run_sweep, SweepConfig, SweepResult};
use divisor_spectra::Error;
use serde::Serialize;

use args::{parse_range, Cli, Command, Common, Format, GraphArgs, VerifyArgs};

pub const TAU_CAP_ENV: &str = "DIVISOR_SPECTRA_TAU_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionCap { .. } => EXIT_CAP,
            Error::NoConvergence { .. } => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_FAILED,
            message: e.to_string(),
        }
    }
}

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let tau_cap_env = std::env::var(TAU_CAP_ENV).ok();
    let result = match &cli.command {
        Command::Spectrum(a) => graph_command(Kind::Spectrum, a, tau_cap_env.as_deref(), out),
        Command::Energy(a) => graph_command(Kind::Energy, a, tau_cap_env.as_deref(), out),
        Command::VertexEnergy(a) => graph_command(Kind::Vertex, a, tau_cap_env.as_deref(), out),
        Command::Verify(a) => verify_command(a, tau_cap_env.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn variant(c: &Common) -> Variant {
    if c.standard {
        Variant::Standard
    } else {
        Variant::Modified
    }
}

fn tau_cap(c: &Common, env: Option<&str>) -> Result<usize, Failure> {
    let cap = match (c.tau_cap, env) {
        (Some(cap), _) => cap,
        (None, Some(v)) => v.trim().parse().map_err(|_| {
            Failure::usage(format!("{TAU_CAP_ENV}=`{v}` is not a positive integer"))
        })?,
        (None, None) => DEFAULT_DIM_CAP,
    };
    if cap == 0 {
        return Err(Failure::usage("tau cap must be positive"));
    }
    Ok(cap)
}

fn tolerance(c: &Common) -> Result<Tolerance, Failure> {
    if !c.tolerance.is_finite() || c.tolerance <= 0.0 {
        return Err(Failure::usage("tolerance must be positive"));
    }
    Ok(Tolerance {
        rel: c.tolerance,
        ..Tolerance::default()
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Spectrum,
    Energy,
    Vertex,
}

#[derive(Serialize)]
struct VertexRow {
    divisor: u64,
    numeric: f64,
    closed: Option<f64>,
    residual: Option<f64>,
}

/// The JSON document emitted by the single-n commands.
#[derive(Serialize)]
struct Document {
    n: u64,
    variant: Variant,
    construction: &'static str,
    tau: usize,
    sigma: usize,
    mu: f64,
    divisors: Vec<u64>,
    eigenvalues: Vec<f64>,
    zero_multiplicity: usize,
    energy_numeric: f64,
    energy_closed: Option<f64>,
    residual: Option<f64>,
    vertex_energies: Vec<VertexRow>,
    vertex_energy_sum: f64,
    passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    adjacency: Option<Vec<Vec<u8>>>,
}

fn build(a: &GraphArgs, cap: usize) -> Result<(DivisorGraph, &'static str), Failure> {
    if a.n == 0 {
        return Err(Failure::usage("n must be a positive integer"));
    }
    let v = variant(&a.common);
    if a.kronecker {
        if v != Variant::Modified {
            return Err(Failure::usage("--kronecker requires the modified variant"));
        }
        if a.n >= 2 {
            return Ok((build_kronecker(a.n, cap)?, "kronecker"));
        }
    }
    Ok((build_direct(a.n, v, cap)?, "direct"))
}

fn document(
    g: &DivisorGraph,
    r: &EnergyReport,
    construction: &'static str,
    show: bool,
) -> Document {
    let vertex_energies = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &divisor)| {
            let numeric = r.vertex_energies_numeric[i];
            let closed = r.vertex_energies_closed.as_ref().map(|c| c[i]);
            VertexRow {
                divisor,
                numeric,
                closed,
                residual: closed.map(|c| (numeric - c).abs()),
            }
        })
        .collect();
    let adjacency = show.then(|| {
        let m = g.adjacency();
        (0..m.dim())
            .map(|i| m.row(i).iter().map(|x| *x as u8).collect())
            .collect()
    });
    Document {
        n: r.n,
        variant: r.variant,
        construction,
        tau: r.tau,
        sigma: r.sigma,
        mu: r.mu,
        divisors: g.vertices().to_vec(),
        eigenvalues: r.eigenvalues.clone(),
        zero_multiplicity: r.zero_multiplicity,
        energy_numeric: r.total_energy_numeric,
        energy_closed: r.total_energy_closed,
        residual: r.residual_total,
        vertex_energies,
        vertex_energy_sum: r.vertex_energies_numeric.iter().sum(),
        passed: r.passed,
        adjacency,
    }
}

fn graph_command(
    kind: Kind,
    a: &GraphArgs,
    env: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let cap = tau_cap(&a.common, env)?;
    let tol = tolerance(&a.common)?;
    let (g, construction) = build(a, cap)?;
    let s = eigen_symmetric_capped(g.adjacency(), cap)?;
    let report = EnergyReport::new(&g, &s, tol);
    let doc = document(&g, &report, construction, a.show_matrix);

    match a.common.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(kind, &doc, out)?,
        Format::Table => write_table(kind, &doc, out)?,
    }

    let failed = kind != Kind::Spectrum && doc.passed == Some(false);
    Ok(if failed { EXIT_FAILED } else { EXIT_OK })
}

fn verdict(passed: Option<bool>) -> &'static str {
    match passed {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a (no closed form)",
    }
}

fn write_table(kind: Kind, d: &Document, out: &mut dyn Write) -> io::Result<()> {
    use number::table as t;
    writeln!(
        out,
        "n = {} ({}, {} construction)",
        d.n, d.variant, d.construction
    )?;
    writeln!(
        out,
        "tau = {}, sigma = {}, mu = {}",
        d.tau,
        d.sigma,
        t(d.mu)
    )?;
    match kind {
        Kind::Spectrum => {
            let divisors: Vec<String> = d.divisors.iter().map(u64::to_string).collect();
            writeln!(out, "divisors: {}", divisors.join(" "))?;
            writeln!(out, "zero multiplicity: {}", d.zero_multiplicity)?;
            writeln!(out, "eigenvalues:")?;
            for l in &d.eigenvalues {
                writeln!(out, "  {:>18}", t(*l))?;
            }
        }
        Kind::Energy => {
            writeln!(out, "energy (numeric):     {}", t(d.energy_numeric))?;
            match d.energy_closed {
                Some(c) => writeln!(out, "energy (closed form): {}", t(c))?,
                None => writeln!(out, "energy (closed form): -")?,
            }
            if let Some(r) = d.residual {
                writeln!(out, "residual:             {}", t(r))?;
            }
            writeln!(out, "verdict: {}", verdict(d.passed))?;
        }
        Kind::Vertex => {
            writeln!(
                out,
                "{:>14}  {:>18}  {:>18}  {:>18}",
                "divisor", "numeric", "closed", "residual"
            )?;
            for row in &d.vertex_energies {
                writeln!(
                    out,
                    "{:>14}  {:>18}  {:>18}  {:>18}",
                    row.divisor,
                    t(row.numeric),
                    row.closed.map(t).unwrap_or_else(|| "-".into()),
                    row.residual.map(t).unwrap_or_else(|| "-".into()),
                )?;
            }
            writeln!(
                out,
                "{:>14}  {:>18}  (energy {}, difference {})",
                "sum",
                t(d.vertex_energy_sum),
                t(d.energy_numeric),
                t((d.vertex_energy_sum - d.energy_numeric).abs())
            )?;
            writeln!(out, "verdict: {}", verdict(d.passed))?;
        }
    }
    if let Some(rows) = &d.adjacency {
        writeln!(out, "adjacency:")?;
        for row in rows {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(out, "  {}", cells.join(" "))?;
        }
    }
    Ok(())
}

fn write_csv(kind: Kind, d: &Document, out: &mut dyn Write) -> io::Result<()> {
    use number::{csv, csv_opt};
    match kind {
        Kind::Spectrum => {
            writeln!(out, "n,variant,index,eigenvalue")?;
            for (i, l) in d.eigenvalues.iter().enumerate() {
                writeln!(out, "{},{},{},{}", d.n, d.variant, i, csv(*l))?;
            }
        }
        Kind::Energy => {
            writeln!(
                out,
                "n,variant,tau,sigma,mu,energy_numeric,energy_closed,residual,passed"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                d.n,
                d.variant,
                d.tau,
                d.sigma,
                csv(d.mu),
                csv(d.energy_numeric),
                csv_opt(d.energy_closed),
                csv_opt(d.residual),
                d.passed.map(|p| p.to_string()).unwrap_or_default()
            )?;
        }
        Kind::Vertex => {
            writeln!(out, "n,variant,divisor,numeric,closed,residual")?;
            for row in &d.vertex_energies {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    d.n,
                    d.variant,
                    row.divisor,
                    csv(row.numeric),
                    csv_opt(row.closed),
                    csv_opt(row.residual)
                )?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    config: &'a SweepConfig,
    checked: usize,
    skipped_count: usize,
    failures: usize,
    passed: bool,
    #[serde(flatten)]
    result: &'a SweepResult,
}

fn verify_command(a: &VerifyArgs, env: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    let (lo, hi) = parse_range(&a.range).map_err(Failure::usage)?;
    let checks = parse_checks(&a.checks).map_err(Failure::usage)?;
    if a.jobs == Some(0) {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let cfg = SweepConfig {
        lo,
        hi,
        variant: variant(&a.common),
        tau_cap: tau_cap(&a.common, env)?,
        tolerance: tolerance(&a.common)?,
        checks,
        jobs: a.jobs,
    };
    let result = run_sweep(&cfg).map_err(Failure::usage)?;

    match a.common.format {
        Format::Json => {
            let doc = VerifyDocument {
                config: &cfg,
                checked: result.checked(),
                skipped_count: result.skipped.len(),
                failures: result.failures(),
                passed: result.all_passed(),
                result: &result,
            };
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "n,check,residual,threshold,passed,note")?;
            for rec in &result.per_n {
                for o in &rec.outcomes {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        rec.n,
                        o.check,
                        number::csv(o.residual),
                        number::csv(o.threshold),
                        o.passed,
                        o.note.as_deref().unwrap_or("").replace(',', ";")
                    )?;
                }
            }
        }
        Format::Table => write_verify_table(&cfg, &result, a.detail, out)?,
    }
    Ok(if result.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn write_verify_table(
    cfg: &SweepConfig,
    r: &SweepResult,
    detail: bool,
    out: &mut dyn Write,
) -> io::Result<()> {
    use number::table as t;
    writeln!(
        out,
        "range {}..{}: {} checked, {} skipped",
        cfg.lo,
        cfg.hi,
        r.checked(),
        r.skipped.len()
    )?;
    writeln!(
        out,
        "{:<10} {:>8} {:>8} {:>8}",
        "check", "passed", "failed", "n/a"
    )?;
    for s in &r.summary {
        writeln!(
            out,
            "{:<10} {:>8} {:>8} {:>8}",
            s.check.to_string(),
            s.passed,
            s.failed,
            s.not_applicable
        )?;
    }
    if let Some(w) = &r.worst {
        writeln!(
            out,
            "worst: {} at n = {}, residual {}, threshold {}",
            w.check,
            w.n,
            t(w.residual),
            t(w.threshold)
        )?;
    }
    for s in &r.skipped {
        writeln!(out, "skipped n = {}: {}", s.n, s.reason)?;
    }
    if detail {
        for rec in &r.per_n {
            for o in &rec.outcomes {
                writeln!(
                    out,
                    "  n = {:<8} {:<10} residual {:>18}  {}{}",
                    rec.n,
                    o.check.to_string(),
                    t(o.residual),
                    if o.passed { "pass" } else { "FAIL" },
                    o.note
                        .as_ref()
                        .map(|n| format!(" ({n})"))
                        .unwrap_or_default()
                )?;
            }
        }
    }
    writeln!(
        out,
        "{}",
        if r.all_passed() {
            "all checks passed".to_string()
        } else {
            format!("{} check(s) FAILED", r.failures())
        }
    )
}
