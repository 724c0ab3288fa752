//! Graph energy and vertex energy for graphs with self-loops.
//!
//! For a graph on N vertices with σ loops the shift is `mu = σ/N`; the
//! energy is `Σ |λ_j − mu|` and the energy of vertex i is the i-th diagonal
//! entry of `|A − mu·I|`. Vertex energies always sum to the energy.
//!
//! The closed forms below cover the divisor prime graphs:
//!
//! | graph                  | energy                                  |
//! |------------------------|-----------------------------------------|
//! | standard, n = p^a      | `2√a`                                   |
//! | modified, n = p^a      | `√(4a+1) + (a−1)/(a+1)`                 |
//! | modified, general n    | `∏√(4a_i+1) + 1 − 2^r/τ(n)`             |

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DivisorGraph, Variant};
use crate::linalg::{shifted_abs_diagonal, SpectralDecomposition};
use crate::numtheory::Factorization;

/// Pass criterion for a numeric value against a closed form:
/// `|numeric − closed| <= max(rel · |closed|, abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-8,
            abs: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn threshold(&self, expected: f64) -> f64 {
        (self.rel * expected.abs()).max(self.abs)
    }

    pub fn accepts(&self, numeric: f64, expected: f64) -> bool {
        (numeric - expected).abs() <= self.threshold(expected)
    }
}

fn shift(s: &SpectralDecomposition, sigma: usize, n: usize) -> f64 {
    assert_eq!(s.dim(), n, "N must equal the number of eigenvalues");
    if n == 0 {
        return 0.0;
    }
    sigma as f64 / n as f64
}

/// `Σ_j |λ_j − σ/N|`.
pub fn total_energy_numeric(s: &SpectralDecomposition, sigma: usize, n: usize) -> f64 {
    let mu = shift(s, sigma, n);
    s.eigenvalues().iter().map(|l| (l - mu).abs()).sum()
}

/// Diagonal of `|A − (σ/N)·I|`, one entry per vertex.
pub fn vertex_energy_numeric(s: &SpectralDecomposition, sigma: usize, n: usize) -> Vec<f64> {
    shifted_abs_diagonal(s, shift(s, sigma, n))
}

/// Energy of the star `K_{1,a}`, the standard graph of `p^a`.
pub fn energy_star_closed(a: u32) -> f64 {
    2.0 * f64::from(a).sqrt()
}

/// Energy of the modified graph of `p^a`.
pub fn energy_prime_power_closed(a: u32) -> f64 {
    let a = f64::from(a);
    (4.0 * a + 1.0).sqrt() + (a - 1.0) / (a + 1.0)
}

/// Energy of the modified graph of a general `n >= 2`.
pub fn energy_general_closed(f: &Factorization) -> Result<f64> {
    if f.n() < 2 {
        return Err(Error::NotApplicable("closed form not applicable for n = 1"));
    }
    let radical: f64 = f
        .factors()
        .iter()
        .map(|pp| (4.0 * f64::from(pp.exponent) + 1.0).sqrt())
        .product();
    let r = f.distinct_primes() as i32;
    Ok(radical + 1.0 - 2f64.powi(r) / f.tau() as f64)
}

/// Vertex energies of the modified graph of `p^a` as `(center, pendant)`;
/// the center is vertex 1 and every `p^i` is a pendant.
pub fn vertex_energy_prime_power_closed(a: u32) -> (f64, f64) {
    let a = f64::from(a);
    let root = (4.0 * a + 1.0).sqrt();
    let center = (2.0 * a * a + 3.0 * a) / ((a + 1.0) * root);
    let pendant =
        (2.0 * a * a + 2.0 * a + 1.0) / (a * (a + 1.0) * root) + (a - 1.0) / (a * (a + 1.0));
    (center, pendant)
}

/// One of the two nonzero eigenvalues `(1 ± √(4a+1))/2` of a modified
/// prime-power block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn eigenvalue(self, a: u32) -> f64 {
        let root = (4.0 * f64::from(a) + 1.0).sqrt();
        match self {
            Branch::Plus => (1.0 + root) / 2.0,
            Branch::Minus => (1.0 - root) / 2.0,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Squared coordinate, at a vertex, of the unit eigenvector of a modified
/// prime-power block for the eigenvalue `branch`. `divides` says whether the
/// block's prime divides the vertex (pendant) or not (center).
pub fn vertex_weight(a: u32, divides: bool, branch: Branch) -> f64 {
    let lambda = branch.eigenvalue(a);
    let root = (4.0 * f64::from(a) + 1.0).sqrt();
    let base = if divides { lambda.recip() } else { lambda };
    branch.sign() / root * base
}

/// Closed-form vertex energy of divisor `v` in the modified graph of `n >= 2`.
///
/// The 2^r nonzero eigenvalues are the products of one branch per prime;
/// their squared coordinates at `v` are the products of the per-prime
/// weights. Whatever mass is left goes to the zero eigenspace, which sits at
/// distance `1/τ(n)` from the shift.
pub fn vertex_energy_general_closed(f: &Factorization, v: u64) -> Result<f64> {
    if f.n() < 2 {
        return Err(Error::NotApplicable("closed form not applicable for n = 1"));
    }
    if v == 0 || !f.n().is_multiple_of(v) {
        return Err(Error::NotADivisor { n: f.n(), v });
    }
    let mu = 1.0 / f.tau() as f64;
    let r = f.distinct_primes();

    let mut nonzero_mass = 0.0;
    let mut energy = 0.0;
    for mask in 0u32..(1 << r) {
        let mut lambda = 1.0;
        let mut weight = 1.0;
        for (i, pp) in f.factors().iter().enumerate() {
            let branch = Branch::BOTH[((mask >> (r - 1 - i)) & 1) as usize];
            lambda *= branch.eigenvalue(pp.exponent);
            weight *= vertex_weight(pp.exponent, v.is_multiple_of(pp.prime), branch);
        }
        nonzero_mass += weight;
        energy += (lambda - mu).abs() * weight;
    }
    Ok(mu * (1.0 - nonzero_mass) + energy)
}

/// Closed-form per-vertex energies in divisor order, where one exists.
fn vertex_energies_closed(g: &DivisorGraph) -> Option<Vec<f64>> {
    match g.variant() {
        Variant::Modified if g.n() >= 2 => Some(
            g.vertices()
                .iter()
                .map(|&v| {
                    vertex_energy_general_closed(g.factorization(), v).expect("vertices divide n")
                })
                .collect(),
        ),
        _ => None,
    }
}

/// Closed-form total energy for `g`, where one exists.
pub fn closed_energy_for(g: &DivisorGraph) -> Option<f64> {
    match g.variant() {
        Variant::Modified => energy_general_closed(g.factorization()).ok(),
        Variant::Standard => g
            .factorization()
            .prime_power_exponent()
            .map(energy_star_closed),
    }
}

/// Numeric energies of one graph next to the closed forms that apply to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub n: u64,
    pub variant: Variant,
    pub tau: usize,
    pub sigma: usize,
    pub mu: f64,
    pub eigenvalues: Vec<f64>,
    pub zero_multiplicity: usize,
    pub total_energy_numeric: f64,
    pub total_energy_closed: Option<f64>,
    pub vertex_energies_numeric: Vec<f64>,
    pub vertex_energies_closed: Option<Vec<f64>>,
    /// `|numeric − closed|` for the total energy, when a closed form exists.
    pub residual_total: Option<f64>,
    pub residual_total_rel: Option<f64>,
    /// Largest per-vertex `|numeric − closed|`.
    pub residual_vertex_max: Option<f64>,
    /// `|Σ vertex energies − total energy|`.
    pub vertex_sum_residual: f64,
    /// `None` when no closed form applies.
    pub passed: Option<bool>,
}

impl EnergyReport {
    pub fn new(g: &DivisorGraph, s: &SpectralDecomposition, tol: Tolerance) -> Self {
        let tau = g.order();
        let sigma = g.sigma();
        let total = total_energy_numeric(s, sigma, tau);
        let vertex = vertex_energy_numeric(s, sigma, tau);
        let vertex_sum: f64 = vertex.iter().sum();

        let total_closed = closed_energy_for(g);
        let vertex_closed = vertex_energies_closed(g);

        let residual_total = total_closed.map(|c| (total - c).abs());
        let residual_total_rel =
            total_closed.map(|c| (total - c).abs() / c.abs().max(f64::MIN_POSITIVE));
        let residual_vertex_max = vertex_closed.as_ref().map(|closed| {
            vertex
                .iter()
                .zip(closed)
                .fold(0.0f64, |m, (x, c)| m.max((x - c).abs()))
        });

        let passed = total_closed.map(|c| {
            let vertex_ok = vertex_closed
                .as_ref()
                .is_none_or(|closed| vertex.iter().zip(closed).all(|(x, c)| tol.accepts(*x, *c)));
            tol.accepts(total, c) && vertex_ok
        });

        Self {
            n: g.n(),
            variant: g.variant(),
            tau,
            sigma,
            mu: if tau == 0 {
                0.0
            } else {
                sigma as f64 / tau as f64
            },
            eigenvalues: s.eigenvalues().to_vec(),
            zero_multiplicity: s.zero_multiplicity(),
            total_energy_numeric: total,
            total_energy_closed: total_closed,
            vertex_energies_numeric: vertex,
            vertex_energies_closed: vertex_closed,
            residual_total,
            residual_total_rel,
            residual_vertex_max,
            vertex_sum_residual: (vertex_sum - total).abs(),
            passed,
        }
    }
}
