//! Factorization, divisor enumeration and gcd.
//!
//! Divisors are enumerated in mixed-radix order over the exponent vectors,
//! with the exponent of the *last* (largest) prime varying fastest. This is
//! the same index order as the left-to-right Kronecker product
//! `A(p1^a1) ⊗ … ⊗ A(pr^ar)`, so the two graph constructions agree entrywise.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest n accepted by [`factorize`].
pub const DEFAULT_N_CAP: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

/// Prime factorization of `n` with strictly ascending primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<PrimePower>,
    tau: u64,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    /// Number of positive divisors.
    pub fn tau(&self) -> u64 {
        self.tau
    }

    /// Number of distinct primes.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    /// `Some(exponent)` when n is a power of a single prime.
    pub fn prime_power_exponent(&self) -> Option<u32> {
        match self.factors.as_slice() {
            [only] => Some(only.exponent),
            _ => None,
        }
    }
}

/// Factorizes `n` by trial division, with the default cap on `n`.
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_capped(n, DEFAULT_N_CAP)
}

pub fn factorize_capped(n: u64, cap: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidN(n));
    }
    if n > cap {
        return Err(Error::NTooLarge { n, cap });
    }

    let mut factors = Vec::new();
    let mut rest = n;
    let mut take = |p: u64, rest: &mut u64| {
        let mut exponent = 0;
        while rest.is_multiple_of(p) {
            *rest /= p;
            exponent += 1;
        }
        if exponent > 0 {
            factors.push(PrimePower { prime: p, exponent });
        }
    };

    take(2, &mut rest);
    take(3, &mut rest);
    // candidates 6k ± 1
    let mut k = 5u64;
    while k * k <= rest {
        take(k, &mut rest);
        take(k + 2, &mut rest);
        k += 6;
    }
    if rest > 1 {
        take(rest, &mut rest);
    }

    let tau = factors.iter().map(|f| u64::from(f.exponent) + 1).product();
    Ok(Factorization { n, factors, tau })
}

/// All divisors of `f.n()`, index 0 is always 1.
///
/// The divisor at index `j` has exponent vector `(b1, …, br)` read as the
/// mixed-radix digits of `j` with radices `(a1+1, …, ar+1)`, `br` least
/// significant.
pub fn divisors(f: &Factorization) -> Vec<u64> {
    let mut out = Vec::with_capacity(f.tau as usize);
    out.push(1u64);
    for pp in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (pp.exponent as usize + 1));
        for &d in &out {
            let mut power = 1u64;
            for _ in 0..=pp.exponent {
                next.push(d * power);
                power *= pp.prime;
            }
        }
        out = next;
    }
    out
}

pub fn gcd(mut u: u64, mut v: u64) -> u64 {
    while v != 0 {
        let t = u % v;
        u = v;
        v = t;
    }
    u
}
