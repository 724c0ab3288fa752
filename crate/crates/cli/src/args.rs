use clap::{Args, Parser, Subcommand, ValueEnum};

const CSV_COLUMNS: &str = "\
CSV columns (header row always emitted):
  spectrum       n,variant,index,eigenvalue
  energy         n,variant,tau,sigma,mu,energy_numeric,energy_closed,residual,passed
  vertex-energy  n,variant,divisor,numeric,closed,residual
  verify         n,check,residual,threshold,passed,note
Absent values are empty fields.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 tau cap exceeded.";

#[derive(Debug, Parser)]
#[command(
    name = "divisor-spectra",
    version,
    about = "Spectra and self-loop energy of divisor prime graphs",
    after_help = CSV_COLUMNS
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divisors, eigenvalues, σ, μ = σ/τ(n) and the zero multiplicity.
    #[command(after_help = CSV_COLUMNS)]
    Spectrum(GraphArgs),
    /// Numeric energy next to the closed form, when one applies.
    #[command(after_help = CSV_COLUMNS)]
    Energy(GraphArgs),
    /// Energy of every divisor vertex, with the sum against the total.
    #[command(name = "vertex-energy", after_help = CSV_COLUMNS)]
    VertexEnergy(GraphArgs),
    /// Check closed forms and invariants over a range of n.
    #[command(after_help = CSV_COLUMNS)]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Keep the loop at vertex 1 (default).
    #[arg(long, conflicts_with = "standard")]
    pub modified: bool,
    /// Drop the loop at vertex 1.
    #[arg(long)]
    pub standard: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Largest τ(n) accepted; overrides DIVISOR_SPECTRA_TAU_CAP (default 4096).
    #[arg(long, value_name = "N")]
    pub tau_cap: Option<usize>,
    /// Relative tolerance for closed-form comparisons.
    #[arg(long, value_name = "REL", default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    pub n: u64,
    #[command(flatten)]
    pub common: Common,
    /// Print the adjacency matrix.
    #[arg(long)]
    pub show_matrix: bool,
    /// Build the adjacency as a Kronecker product of prime-power blocks
    /// (modified variant only).
    #[arg(long)]
    pub kronecker: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Inclusive range `lo..hi`.
    pub range: String,
    /// `all` or a comma list of thm1,thm2,thm3,thm4,thm5,lemma2,lemma4,spectrum.
    #[arg(long, default_value = "all")]
    pub checks: String,
    #[command(flatten)]
    pub common: Common,
    /// Worker threads.
    #[arg(long, value_name = "K")]
    pub jobs: Option<usize>,
    /// Include per-n rows in table output.
    #[arg(long)]
    pub detail: bool,
}

/// Parses `lo..hi` (inclusive).
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("range `{s}` is not of the form lo..hi"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad range start `{lo}`"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad range end `{hi}`"))?;
    if lo == 0 {
        return Err("range must start at 1 or above".into());
    }
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}
