//! Arithmetic in the ring of integers modulo `n`.
//!
//! Everything here is a pure function of the modulus. Idempotents and
//! self-inverse units are built by Chinese-remainder recombination of the
//! local solutions at each prime power, so their cost is `2^k` rather than
//! `n`. Units are enumerated by a gcd scan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`factorize`].
pub const MAX_MODULUS: u64 = i64::MAX as u64;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime-power decomposition of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
    two_adic: u32,
    k_total: usize,
    k_odd: usize,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Exponent of 2 in `n` (the `m` of the self-inverse unit count).
    pub fn two_adic(&self) -> u32 {
        self.two_adic
    }

    /// Number of distinct primes dividing `n`.
    pub fn k_total(&self) -> usize {
        self.k_total
    }

    /// Number of distinct odd primes dividing `n`.
    pub fn k_odd(&self) -> usize {
        self.k_odd
    }

    /// The prime powers `p^a` in factor order.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, a)| p.pow(a))
    }
}

/// Trial division up to `sqrt(n)`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > MAX_MODULUS {
        return Err(Error::ModulusTooLarge {
            n,
            max: MAX_MODULUS,
        });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut a = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            factors.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let two_adic = match factors.first() {
        Some(&(2, a)) => a,
        _ => 0,
    };
    let k_total = factors.len();
    let k_odd = k_total - usize::from(two_adic > 0);
    Ok(Factorization {
        n,
        factors,
        two_adic,
        k_total,
        k_odd,
    })
}

pub fn euler_phi(fact: &Factorization) -> u64 {
    fact.factors
        .iter()
        .map(|&(p, a)| p.pow(a) - p.pow(a - 1))
        .product()
}

/// Inverse of `u` modulo `n`, in `[0, n)` (so `[1, n)` for `n > 1`).
pub fn mod_inverse(u: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let (mut old_r, mut r) = ((u % n) as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 && n != 1 {
        return Err(Error::NotAUnit { u, n });
    }
    Ok(old_s.rem_euclid(n as i128) as u64)
}

/// For each prime power `q_i`, the residue that is 1 mod `q_i` and 0 mod the
/// other prime powers. Sums of subsets of this basis are the idempotents.
fn crt_basis(fact: &Factorization) -> Vec<u64> {
    let n = fact.n;
    fact.prime_powers()
        .map(|q| {
            let cofactor = n / q;
            let inv = mod_inverse(cofactor % q, q).expect("coprime prime powers");
            mul_mod(cofactor, inv, n)
        })
        .collect()
}

/// Combine one local residue per prime power into a residue mod `n`.
fn crt_combine(basis: &[u64], residues: &[u64], n: u64) -> u64 {
    basis.iter().zip(residues).fold(0u64, |acc, (&b, &r)| {
        ((acc as u128 + mul_mod(b, r, n) as u128) % n as u128) as u64
    })
}

/// All idempotents of `Z_n` in ascending order, `2^k` of them.
pub fn enumerate_idempotents(fact: &Factorization) -> Vec<u64> {
    let n = fact.n;
    if n == 1 {
        return vec![0];
    }
    let basis = crt_basis(fact);
    let mut out: Vec<u64> = (0u64..1 << basis.len())
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0u64, |acc, (_, &b)| (acc + b) % n)
        })
        .collect();
    out.sort_unstable();
    out
}

pub fn enumerate_units(fact: &Factorization) -> Result<Vec<u64>> {
    let n = fact.n;
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    Ok((1..n).filter(|&u| gcd(u, n) == 1).collect())
}

/// Square roots of 1 modulo a single prime power.
fn local_square_roots_of_one(p: u64, a: u32) -> Vec<u64> {
    let q = p.pow(a);
    if p != 2 {
        return vec![1, q - 1];
    }
    match a {
        1 => vec![1],
        2 => vec![1, 3],
        _ => vec![1, q / 2 - 1, q / 2 + 1, q - 1],
    }
}

/// All `u` in `[1, n)` with `u^2 = 1 (mod n)`, ascending.
pub fn enumerate_self_inverse_units(fact: &Factorization) -> Result<Vec<u64>> {
    let n = fact.n;
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    let basis = crt_basis(fact);
    let local: Vec<Vec<u64>> = fact
        .factors
        .iter()
        .map(|&(p, a)| local_square_roots_of_one(p, a))
        .collect();
    let mut out = Vec::with_capacity(local.iter().map(Vec::len).product());
    let mut choice = vec![0usize; local.len()];
    let mut residues = vec![0u64; local.len()];
    loop {
        for (i, roots) in local.iter().enumerate() {
            residues[i] = roots[choice[i]];
        }
        out.push(crt_combine(&basis, &residues, n));
        // odometer over the local choices
        let mut i = 0;
        loop {
            if i == local.len() {
                out.sort_unstable();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < local[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Closed-form count of self-inverse units: `2^k_odd` scaled by 1, 2 or 4
/// depending on the power of two dividing `n`.
pub fn count_self_inverse_closed(fact: &Factorization) -> Result<u64> {
    let n = fact.n;
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    let extra = match fact.two_adic {
        0 | 1 => 0,
        2 => 1,
        _ => 2,
    };
    Ok(1u64 << (fact.k_odd + extra))
}

/// The unit group data of `Z_n` used by graph construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingData {
    pub fact: Factorization,
    pub idempotents: Vec<u64>,
    pub units: Vec<u64>,
    pub self_inverse_units: Vec<u64>,
    pub phi: u64,
    pub r: u64,
}

impl RingData {
    pub fn new(n: u64) -> Result<Self> {
        let fact = factorize(n)?;
        Self::from_factorization(fact)
    }

    pub fn from_factorization(fact: Factorization) -> Result<Self> {
        let idempotents = enumerate_idempotents(&fact);
        let units = enumerate_units(&fact)?;
        let self_inverse_units = enumerate_self_inverse_units(&fact)?;
        let phi = euler_phi(&fact);
        let r = self_inverse_units.len() as u64;
        Ok(RingData {
            fact,
            idempotents,
            units,
            self_inverse_units,
            phi,
            r,
        })
    }

    pub fn n(&self) -> u64 {
        self.fact.n
    }

    pub fn nonzero_idempotents(&self) -> &[u64] {
        &self.idempotents[1..]
    }

    /// Units that are not their own inverse.
    pub fn non_self_inverse_units(&self) -> Vec<u64> {
        self.units
            .iter()
            .copied()
            .filter(|u| self.self_inverse_units.binary_search(u).is_err())
            .collect()
    }

    /// Nonzero idempotents listed as `1, e, 1-e, e', 1-e', ...`, each
    /// nontrivial idempotent followed by its complement. `e` runs over the
    /// smaller member of each complementary pair, ascending.
    pub fn complement_ordered_idempotents(&self) -> Vec<u64> {
        let n = self.fact.n;
        let mut out = vec![1 % n];
        for &e in self.idempotents.iter().filter(|&&e| e > 1) {
            let c = (n + 1 - e) % n;
            if e < c {
                out.push(e);
                out.push(c);
            }
        }
        out
    }
}
