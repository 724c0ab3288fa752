//! Divisor prime graphs: vertices are the divisors of n, two distinct
//! divisors are adjacent iff they are coprime.
//!
//! The standard graph drops the loop at vertex 1; the modified graph keeps
//! it, so its adjacency matrix has trace 1. A loop contributes 1 to its
//! diagonal entry.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::numtheory::{divisors, factorize, gcd, Factorization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Modified,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Modified => "modified",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Variant::Standard),
            "modified" => Ok(Variant::Modified),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisorGraph {
    factorization: Factorization,
    variant: Variant,
    vertices: Vec<u64>,
    adjacency: SymmetricMatrix,
    sigma: usize,
}

impl DivisorGraph {
    pub fn n(&self) -> u64 {
        self.factorization.n()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Divisors in the order used for the adjacency rows.
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn adjacency(&self) -> &SymmetricMatrix {
        &self.adjacency
    }

    /// Number of self-loops.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Degree of each vertex, a loop counted once.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order())
            .map(|i| self.adjacency.row(i).iter().filter(|x| **x != 0.0).count())
            .collect()
    }
}

fn check_cap(f: &Factorization, cap: usize) -> Result<()> {
    let tau = f.tau();
    if tau > cap as u64 {
        return Err(Error::DimensionCap {
            dim: usize::try_from(tau).unwrap_or(usize::MAX),
            cap,
        });
    }
    Ok(())
}

/// Builds the graph by pairwise gcd over the ordered divisor list.
pub fn build_direct(n: u64, variant: Variant, cap: usize) -> Result<DivisorGraph> {
    build_direct_from(factorize(n)?, variant, cap)
}

pub fn build_direct_from(f: Factorization, variant: Variant, cap: usize) -> Result<DivisorGraph> {
    check_cap(&f, cap)?;
    let vertices = divisors(&f);
    let adjacency = SymmetricMatrix::from_fn(vertices.len(), |i, j| {
        let (u, v) = (vertices[i], vertices[j]);
        if i == j && (variant == Variant::Standard || u != 1) {
            0.0
        } else if gcd(u, v) == 1 {
            1.0
        } else {
            0.0
        }
    });
    let sigma = match variant {
        Variant::Standard => 0,
        Variant::Modified => 1,
    };
    Ok(DivisorGraph {
        factorization: f,
        variant,
        vertices,
        adjacency,
        sigma,
    })
}

/// Builds the modified graph as `A(p1^a1) ⊗ … ⊗ A(pr^ar)`.
///
/// Only the modified variant factors this way; n = 1 has no prime factors
/// and is rejected.
pub fn build_kronecker(n: u64, cap: usize) -> Result<DivisorGraph> {
    build_kronecker_from(factorize(n)?, cap)
}

pub fn build_kronecker_from(f: Factorization, cap: usize) -> Result<DivisorGraph> {
    if f.n() == 1 {
        return Err(Error::NotApplicable("Kronecker construction needs n >= 2"));
    }
    check_cap(&f, cap)?;
    let mut blocks = f
        .factors()
        .iter()
        .map(|pp| prime_power_block(pp.exponent, Variant::Modified));
    let first = blocks.next().expect("n >= 2 has a prime factor");
    let adjacency = blocks.try_fold(first, |acc, b| acc.kronecker(&b, cap))?;
    let vertices = divisors(&f);
    Ok(DivisorGraph {
        factorization: f,
        variant: Variant::Modified,
        vertices,
        adjacency,
        sigma: 1,
    })
}

/// Adjacency of the divisor graph of `p^a`: a star `K_{1,a}` centred at
/// vertex 1, with the loop at the centre for the modified variant.
pub fn prime_power_block(a: u32, variant: Variant) -> SymmetricMatrix {
    let dim = a as usize + 1;
    SymmetricMatrix::from_fn(dim, |i, j| match (i, j) {
        (0, 0) if variant == Variant::Modified => 1.0,
        (0, 0) => 0.0,
        (0, _) => 1.0,
        _ => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_DIM_CAP;

    fn rows(m: &SymmetricMatrix) -> Vec<Vec<f64>> {
        (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
    }

    #[test]
    fn direct_six_modified() {
        let g = build_direct(6, Variant::Modified, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(g.vertices(), &[1, 3, 2, 6]);
        assert_eq!(
            rows(g.adjacency()),
            vec![
                vec![1.0, 1.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0, 0.0],
                vec![1.0, 1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
            ]
        );
        assert_eq!(g.sigma(), 1);
        assert_eq!(g.adjacency().trace(), 1.0);
    }

    #[test]
    fn direct_prime() {
        let g = build_direct(7, Variant::Modified, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(rows(g.adjacency()), vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        let g = build_direct(7, Variant::Standard, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(rows(g.adjacency()), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(g.sigma(), 0);
    }

    #[test]
    fn direct_one() {
        let g = build_direct(1, Variant::Modified, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(rows(g.adjacency()), vec![vec![1.0]]);
        let g = build_direct(1, Variant::Standard, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(rows(g.adjacency()), vec![vec![0.0]]);
    }

    #[test]
    fn direct_cap_and_zero() {
        assert_eq!(
            build_direct(12, Variant::Modified, 5).unwrap_err(),
            Error::DimensionCap { dim: 6, cap: 5 }
        );
        assert_eq!(
            build_direct(0, Variant::Modified, 5).unwrap_err(),
            Error::InvalidN(0)
        );
    }

    #[test]
    fn kronecker_matches_direct() {
        for n in [6u64, 8, 12, 30, 360] {
            let k = build_kronecker(n, DEFAULT_DIM_CAP).unwrap();
            let d = build_direct(n, Variant::Modified, DEFAULT_DIM_CAP).unwrap();
            assert_eq!(k.adjacency(), d.adjacency(), "n = {n}");
        }
    }

    #[test]
    fn kronecker_twelve_blocks() {
        let a4 = prime_power_block(2, Variant::Modified);
        assert_eq!(
            rows(&a4),
            vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0]
            ]
        );
        let a3 = prime_power_block(1, Variant::Modified);
        let product = a4.kronecker(&a3, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(product.dim(), 6);
        assert_eq!(
            &product,
            build_kronecker(12, DEFAULT_DIM_CAP).unwrap().adjacency()
        );
    }

    #[test]
    fn kronecker_rejects_one() {
        assert!(matches!(
            build_kronecker(1, DEFAULT_DIM_CAP),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn blocks() {
        assert_eq!(
            rows(&prime_power_block(1, Variant::Modified)),
            vec![vec![1.0, 1.0], vec![1.0, 0.0]]
        );
        assert_eq!(
            rows(&prime_power_block(2, Variant::Standard)),
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0]
            ]
        );
        assert_eq!(
            rows(&prime_power_block(3, Variant::Modified)),
            vec![
                vec![1.0, 1.0, 1.0, 1.0],
                vec![1.0, 0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
            ]
        );
    }

    #[test]
    fn variants_differ_only_at_origin() {
        for n in 1..200u64 {
            let s = build_direct(n, Variant::Standard, DEFAULT_DIM_CAP).unwrap();
            let m = build_direct(n, Variant::Modified, DEFAULT_DIM_CAP).unwrap();
            let diffs: Vec<usize> = s
                .adjacency()
                .as_slice()
                .iter()
                .zip(m.adjacency().as_slice())
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(k, _)| k)
                .collect();
            assert_eq!(diffs, vec![0], "n = {n}");
        }
    }

    #[test]
    fn degrees() {
        let g = build_direct(60, Variant::Modified, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(g.degrees()[0] as u64, g.factorization().tau());
        let g = build_direct(32, Variant::Standard, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(g.degrees(), vec![5, 1, 1, 1, 1, 1]);
    }
}
