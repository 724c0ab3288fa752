//! Sweeps over ranges of n comparing numeric spectra and energies against
//! the closed forms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{
    energy_general_closed, energy_prime_power_closed, energy_star_closed, total_energy_numeric,
    vertex_energy_general_closed, vertex_energy_numeric, vertex_energy_prime_power_closed,
    Tolerance,
};
use crate::error::Error;
use crate::graph::{build_direct_from, build_kronecker_from, DivisorGraph, Variant};
use crate::linalg::{eigen_symmetric_capped, SpectralDecomposition};
use crate::numtheory::{factorize, Factorization};

/// Relative tolerance for the vertex-sum identity.
pub const VERTEX_SUM_TOL: f64 = 1e-9;
/// Absolute tolerance on the eigenvalue sum against the trace.
pub const TRACE_TOL: f64 = 1e-9;
/// Nonzero eigenvalues must exceed `1/τ(n)` in magnitude by this margin.
pub const SHIFT_MARGIN: f64 = 1e-9;
/// Spread allowed among the pendant vertex energies of a prime-power graph.
pub const PENDANT_SPREAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Standard graph of p^a: energy 2√a.
    Thm1,
    /// Modified graph of p^a: energy √(4a+1) + (a−1)/(a+1).
    Thm2,
    /// Modified graph of n ≥ 2: energy ∏√(4a_i+1) + 1 − 2^r/τ(n).
    Thm3,
    /// Modified graph of p^a: center and pendant vertex energies.
    Thm4,
    /// Modified graph of n ≥ 2: vertex energy of every divisor.
    Thm5,
    /// Vertex energies sum to the energy.
    Lemma2,
    /// Kronecker and direct constructions agree exactly.
    Lemma4,
    /// 2^r nonzero eigenvalues, trace 1, nonzero |λ| above 1/τ(n).
    SpectrumStructure,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Thm1,
        Check::Thm2,
        Check::Thm3,
        Check::Thm4,
        Check::Thm5,
        Check::Lemma2,
        Check::Lemma4,
        Check::SpectrumStructure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Thm1 => "thm1",
            Check::Thm2 => "thm2",
            Check::Thm3 => "thm3",
            Check::Thm4 => "thm4",
            Check::Thm5 => "thm5",
            Check::Lemma2 => "lemma2",
            Check::Lemma4 => "lemma4",
            Check::SpectrumStructure => "spectrum",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Check::ALL
            .into_iter()
            .find(|c| {
                c.name() == s || (s == "spectrum_structure" && *c == Check::SpectrumStructure)
            })
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

/// Parses `all` or a comma-separated list of check names.
pub fn parse_checks(s: &str) -> std::result::Result<BTreeSet<Check>, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Check::ALL.into_iter().collect());
    }
    let set: BTreeSet<Check> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()?;
    if set.is_empty() {
        return Err("no checks given".into());
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub lo: u64,
    pub hi: u64,
    /// Graph used for the vertex-sum check; theorem checks use the variant
    /// their statement is about.
    pub variant: Variant,
    pub tau_cap: usize,
    pub tolerance: Tolerance,
    pub checks: BTreeSet<Check>,
    /// Worker threads; `None` uses the global rayon pool.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lo: 2,
            hi: 100,
            variant: Variant::Modified,
            tau_cap: crate::linalg::DEFAULT_DIM_CAP,
            tolerance: Tolerance::default(),
            checks: Check::ALL.into_iter().collect(),
            jobs: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.lo < 1 {
            return Err("range must start at n >= 1".into());
        }
        if self.lo > self.hi {
            return Err(format!("empty range {}..{}", self.lo, self.hi));
        }
        if self.tolerance.rel.is_nan()
            || self.tolerance.rel <= 0.0
            || self.tolerance.abs.is_nan()
            || self.tolerance.abs <= 0.0
        {
            return Err("tolerances must be positive".into());
        }
        if self.checks.is_empty() {
            return Err("no checks enabled".into());
        }
        if self.jobs == Some(0) {
            return Err("jobs must be at least 1".into());
        }
        Ok(())
    }

    pub fn range_len(&self) -> u64 {
        self.hi - self.lo + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NotApplicable {
    pub check: Check,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NRecord {
    pub n: u64,
    pub tau: u64,
    pub outcomes: Vec<CheckOutcome>,
    pub not_applicable: Vec<NotApplicable>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub n: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: Check,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Worst {
    pub check: Check,
    pub n: u64,
    pub residual: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub per_n: Vec<NRecord>,
    pub summary: Vec<CheckSummary>,
    /// Outcome closest to (or furthest past) its threshold.
    pub worst: Option<Worst>,
    pub skipped: Vec<Skipped>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.summary.iter().map(|s| s.failed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn checked(&self) -> usize {
        self.per_n.len()
    }
}

enum Item {
    Record(NRecord),
    Skipped(Skipped),
}

/// Runs every enabled check over `cfg.lo..=cfg.hi`.
///
/// Each n is independent; results come back in ascending n whatever the
/// scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> std::result::Result<SweepResult, String> {
    cfg.validate()?;
    let work = || -> Vec<Item> {
        (cfg.lo..=cfg.hi)
            .into_par_iter()
            .map(|n| check_n(n, cfg))
            .collect()
    };
    let items = match cfg.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| e.to_string())?
            .install(work),
        None => work(),
    };

    let mut per_n = Vec::new();
    let mut skipped = Vec::new();
    for item in items {
        match item {
            Item::Record(r) => per_n.push(r),
            Item::Skipped(s) => skipped.push(s),
        }
    }

    let summary = cfg
        .checks
        .iter()
        .map(|&check| {
            let mut s = CheckSummary {
                check,
                passed: 0,
                failed: 0,
                not_applicable: 0,
            };
            for r in &per_n {
                for o in r.outcomes.iter().filter(|o| o.check == check) {
                    if o.passed {
                        s.passed += 1;
                    } else {
                        s.failed += 1;
                    }
                }
                s.not_applicable += r.not_applicable.iter().filter(|x| x.check == check).count();
            }
            s
        })
        .collect();

    let mut worst: Option<(f64, Worst)> = None;
    for r in &per_n {
        for o in &r.outcomes {
            let ratio = severity(o);
            if worst.as_ref().is_none_or(|(w, _)| ratio > *w) {
                worst = Some((
                    ratio,
                    Worst {
                        check: o.check,
                        n: r.n,
                        residual: o.residual,
                        threshold: o.threshold,
                    },
                ));
            }
        }
    }

    Ok(SweepResult {
        per_n,
        summary,
        worst: worst.map(|(_, w)| w),
        skipped,
    })
}

fn severity(o: &CheckOutcome) -> f64 {
    if !o.passed {
        return f64::INFINITY;
    }
    if o.threshold > 0.0 {
        o.residual / o.threshold
    } else if o.residual == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

type Spectrum = std::result::Result<(DivisorGraph, SpectralDecomposition), Error>;

/// Lazily built graph and decomposition for one variant.
struct Lazy<'a> {
    f: &'a Factorization,
    variant: Variant,
    cap: usize,
    cell: Option<Spectrum>,
}

impl<'a> Lazy<'a> {
    fn new(f: &'a Factorization, variant: Variant, cap: usize) -> Self {
        Self {
            f,
            variant,
            cap,
            cell: None,
        }
    }

    fn get(&mut self) -> &Spectrum {
        let (f, variant, cap) = (self.f, self.variant, self.cap);
        self.cell.get_or_insert_with(|| {
            let g = build_direct_from(f.clone(), variant, cap)?;
            let s = eigen_symmetric_capped(g.adjacency(), cap)?;
            Ok((g, s))
        })
    }
}

fn failed(check: Check, err: &Error) -> CheckOutcome {
    CheckOutcome {
        check,
        residual: f64::INFINITY,
        threshold: 0.0,
        passed: false,
        note: Some(err.to_string()),
    }
}

fn check_n(n: u64, cfg: &SweepConfig) -> Item {
    let f = match factorize(n) {
        Ok(f) => f,
        Err(e) => {
            return Item::Skipped(Skipped {
                n,
                reason: e.to_string(),
            })
        }
    };
    if f.tau() > cfg.tau_cap as u64 {
        return Item::Skipped(Skipped {
            n,
            reason: format!("tau(n) = {} exceeds cap {}", f.tau(), cfg.tau_cap),
        });
    }

    let mut modified = Lazy::new(&f, Variant::Modified, cfg.tau_cap);
    let mut standard = Lazy::new(&f, Variant::Standard, cfg.tau_cap);
    let mut outcomes = Vec::new();
    let mut not_applicable = Vec::new();

    for &check in &cfg.checks {
        let result = match check {
            Check::Thm1 => check_thm1(&f, &mut standard, cfg),
            Check::Thm2 => check_thm2(&f, &mut modified, cfg),
            Check::Thm3 => check_thm3(&f, &mut modified, cfg),
            Check::Thm4 => check_thm4(&f, &mut modified, cfg),
            Check::Thm5 => check_thm5(&f, &mut modified, cfg),
            Check::Lemma2 => match cfg.variant {
                Variant::Modified => check_lemma2(&mut modified),
                Variant::Standard => check_lemma2(&mut standard),
            },
            Check::Lemma4 => check_lemma4(&f, cfg),
            Check::SpectrumStructure => check_structure(&f, &mut modified),
        };
        match result {
            Applicability::Outcome(o) => outcomes.push(CheckOutcome { check, ..o }),
            Applicability::NotApplicable(reason) => not_applicable.push(NotApplicable {
                check,
                reason: reason.to_string(),
            }),
        }
    }

    if outcomes.is_empty() {
        let mut reasons: Vec<&str> = not_applicable.iter().map(|x| x.reason.as_str()).collect();
        reasons.dedup();
        return Item::Skipped(Skipped {
            n,
            reason: reasons.join("; "),
        });
    }
    Item::Record(NRecord {
        n,
        tau: f.tau(),
        outcomes,
        not_applicable,
    })
}

enum Applicability {
    Outcome(CheckOutcome),
    NotApplicable(&'static str),
}

const NOT_PRIME_POWER: &str = "n is not a prime power";
const N_IS_ONE: &str = "closed form not applicable for n = 1";

macro_rules! spectrum_or_fail {
    ($lazy:expr, $check:expr) => {
        match $lazy.get() {
            Ok(pair) => pair,
            Err(e) => return Applicability::Outcome(failed($check, e)),
        }
    };
}

fn outcome(residual: f64, threshold: f64, passed: bool, note: Option<String>) -> Applicability {
    Applicability::Outcome(CheckOutcome {
        // overwritten by the caller
        check: Check::Thm1,
        residual,
        threshold,
        passed,
        note,
    })
}

fn compare(numeric: f64, closed: f64, tol: Tolerance) -> Applicability {
    let residual = (numeric - closed).abs();
    let threshold = tol.threshold(closed);
    outcome(residual, threshold, residual <= threshold, None)
}

/// Per-vertex comparison: residual is the largest absolute gap, threshold
/// the tightest per-vertex threshold.
fn compare_vertices(numeric: &[f64], closed: &[f64], tol: Tolerance) -> (f64, f64, bool) {
    let mut residual = 0.0f64;
    let mut threshold = f64::INFINITY;
    let mut passed = true;
    for (x, c) in numeric.iter().zip(closed) {
        residual = residual.max((x - c).abs());
        threshold = threshold.min(tol.threshold(*c));
        passed &= tol.accepts(*x, *c);
    }
    (residual, threshold, passed)
}

fn check_thm1(f: &Factorization, standard: &mut Lazy, cfg: &SweepConfig) -> Applicability {
    let Some(a) = f.prime_power_exponent() else {
        return Applicability::NotApplicable(NOT_PRIME_POWER);
    };
    let (g, s) = spectrum_or_fail!(standard, Check::Thm1);
    let e = total_energy_numeric(s, g.sigma(), g.order());
    compare(e, energy_star_closed(a), cfg.tolerance)
}

fn check_thm2(f: &Factorization, modified: &mut Lazy, cfg: &SweepConfig) -> Applicability {
    let Some(a) = f.prime_power_exponent() else {
        return Applicability::NotApplicable(NOT_PRIME_POWER);
    };
    let (g, s) = spectrum_or_fail!(modified, Check::Thm2);
    let e = total_energy_numeric(s, g.sigma(), g.order());
    compare(e, energy_prime_power_closed(a), cfg.tolerance)
}

fn check_thm3(f: &Factorization, modified: &mut Lazy, cfg: &SweepConfig) -> Applicability {
    let Ok(closed) = energy_general_closed(f) else {
        return Applicability::NotApplicable(N_IS_ONE);
    };
    let (g, s) = spectrum_or_fail!(modified, Check::Thm3);
    let e = total_energy_numeric(s, g.sigma(), g.order());
    compare(e, closed, cfg.tolerance)
}

fn check_thm4(f: &Factorization, modified: &mut Lazy, cfg: &SweepConfig) -> Applicability {
    let Some(a) = f.prime_power_exponent() else {
        return Applicability::NotApplicable(NOT_PRIME_POWER);
    };
    let (g, s) = spectrum_or_fail!(modified, Check::Thm4);
    let numeric = vertex_energy_numeric(s, g.sigma(), g.order());
    let (center, pendant) = vertex_energy_prime_power_closed(a);
    let mut closed = vec![pendant; numeric.len()];
    closed[0] = center;
    let (residual, threshold, mut passed) = compare_vertices(&numeric, &closed, cfg.tolerance);

    let pendants = &numeric[1..];
    let spread = pendants.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - pendants.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut note = None;
    if spread > PENDANT_SPREAD_TOL {
        passed = false;
        note = Some(format!("pendant energies spread {spread:e}"));
    }
    outcome(residual, threshold, passed, note)
}

fn check_thm5(f: &Factorization, modified: &mut Lazy, cfg: &SweepConfig) -> Applicability {
    if f.n() < 2 {
        return Applicability::NotApplicable(N_IS_ONE);
    }
    let (g, s) = spectrum_or_fail!(modified, Check::Thm5);
    let numeric = vertex_energy_numeric(s, g.sigma(), g.order());
    let closed: Vec<f64> = g
        .vertices()
        .iter()
        .map(|&v| vertex_energy_general_closed(f, v).expect("vertices divide n"))
        .collect();
    let (residual, threshold, passed) = compare_vertices(&numeric, &closed, cfg.tolerance);
    outcome(residual, threshold, passed, None)
}

fn check_lemma2(lazy: &mut Lazy) -> Applicability {
    let (g, s) = spectrum_or_fail!(lazy, Check::Lemma2);
    let total = total_energy_numeric(s, g.sigma(), g.order());
    let sum: f64 = vertex_energy_numeric(s, g.sigma(), g.order()).iter().sum();
    let residual = (sum - total).abs();
    let threshold = VERTEX_SUM_TOL * total.max(1.0);
    outcome(residual, threshold, residual < threshold, None)
}

fn check_lemma4(f: &Factorization, cfg: &SweepConfig) -> Applicability {
    if f.n() < 2 {
        return Applicability::NotApplicable("Kronecker construction needs n >= 2");
    }
    let direct = match build_direct_from(f.clone(), Variant::Modified, cfg.tau_cap) {
        Ok(g) => g,
        Err(e) => return Applicability::Outcome(failed(Check::Lemma4, &e)),
    };
    let kron = match build_kronecker_from(f.clone(), cfg.tau_cap) {
        Ok(g) => g,
        Err(e) => return Applicability::Outcome(failed(Check::Lemma4, &e)),
    };
    let residual = direct
        .adjacency()
        .as_slice()
        .iter()
        .zip(kron.adjacency().as_slice())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let same_vertices = direct.vertices() == kron.vertices();
    let note = (!same_vertices).then(|| "vertex orders differ".to_string());
    outcome(residual, 0.0, residual == 0.0 && same_vertices, note)
}

fn check_structure(f: &Factorization, modified: &mut Lazy) -> Applicability {
    if f.n() < 2 {
        return Applicability::NotApplicable(N_IS_ONE);
    }
    let (_, s) = spectrum_or_fail!(modified, Check::SpectrumStructure);
    let expected_nonzero = 1usize << f.distinct_primes();
    let nonzero: Vec<f64> = s
        .eigenvalues()
        .iter()
        .cloned()
        .filter(|l| !s.is_zero(*l))
        .collect();
    let trace: f64 = s.eigenvalues().iter().sum();
    let residual = (trace - 1.0).abs();
    let mu = 1.0 / f.tau() as f64;
    let min_abs = nonzero.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));

    let mut problems = Vec::new();
    if nonzero.len() != expected_nonzero {
        problems.push(format!(
            "{} nonzero eigenvalues, expected {expected_nonzero}",
            nonzero.len()
        ));
    }
    if min_abs - mu <= SHIFT_MARGIN {
        problems.push(format!("min nonzero |λ| = {min_abs} not above 1/τ = {mu}"));
    }
    if residual > TRACE_TOL {
        problems.push(format!("eigenvalue sum {trace} differs from trace 1"));
    }
    let passed = problems.is_empty();
    outcome(
        residual,
        TRACE_TOL,
        passed,
        (!passed).then(|| problems.join("; ")),
    )
}
