//! Divisor prime graphs and their energies.
//!
//! The vertices of the divisor prime graph of `n` are the divisors of `n`;
//! two distinct divisors are adjacent when they are coprime. The *modified*
//! graph keeps the self-loop at vertex 1. This crate builds both graphs,
//! decomposes their adjacency matrices with a Jacobi eigensolver, and
//! computes the self-loop energy `Σ|λ − σ/N|` and per-vertex energies,
//! alongside closed-form values for the cases that have one.

pub mod energy;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod numtheory;
pub mod verify;

pub use energy::{EnergyReport, Tolerance};
pub use error::{Error, Result};
pub use graph::{build_direct, build_kronecker, DivisorGraph, Variant};
pub use linalg::{eigen_symmetric, SpectralDecomposition, SymmetricMatrix};
pub use numtheory::{divisors, factorize, gcd, Factorization};
pub use verify::{run_sweep, Check, SweepConfig, SweepResult};
