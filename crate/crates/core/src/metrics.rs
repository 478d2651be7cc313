//! Distances, diameter and Wiener index of `Cl2(Z_n)`.
//!
//! Each quantity has a closed form in terms of `phi(n)`, the number of
//! distinct primes `k` and the number `r` of self-inverse units, and a
//! brute-force counterpart driven by breadth-first search over the built
//! graph. The Wiener index is also split into the four vertex-pair classes
//! (`s1..s4`, with `s4 = t1 + t2 + t3`) so the two routes can be compared
//! term by term.
//!
//! The published Wiener closed form ([`wiener_closed`]) assumes two distinct
//! non-complementary nontrivial idempotents never annihilate each other. That
//! holds for `k = 2` only; for `k >= 3` pairs such as the idempotents of
//! `{p1}` and `{p2}` multiply to zero and all their cross pairs sit at
//! distance 1. [`wiener_closed_corrected`] counts those pairs exactly.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{CleanGraph, Vertex};
use crate::ring::{count_self_inverse_closed, euler_phi, mul_mod, Factorization, RingData};

/// Shortest-path distance; `Infinite` between different components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

/// Wiener index, or `Infinite` for a disconnected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WienerIndex {
    Finite(u128),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl WienerIndex {
    pub fn finite(self) -> Option<u128> {
        match self {
            WienerIndex::Finite(w) => Some(w),
            WienerIndex::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("INF"),
        }
    }
}

impl fmt::Display for WienerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WienerIndex::Finite(w) => write!(f, "{w}"),
            WienerIndex::Infinite => f.write_str("INF"),
        }
    }
}

// Finite values serialise as JSON numbers (decimal strings past u64), the
// infinite value as the string "INF".
macro_rules! extended_serde {
    ($ty:ident, $inner:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                match *self {
                    $ty::Infinite => s.serialize_str("INF"),
                    $ty::Finite(v) => match u64::try_from(v) {
                        Ok(small) => s.serialize_u64(small),
                        Err(_) => s.serialize_str(&v.to_string()),
                    },
                }
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                struct V;
                impl<'de> Visitor<'de> for V {
                    type Value = $ty;

                    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        f.write_str("a non-negative integer or \"INF\"")
                    }

                    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<$ty, E> {
                        <$inner>::try_from(v).map($ty::Finite).map_err(E::custom)
                    }

                    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<$ty, E> {
                        <$inner>::try_from(v).map($ty::Finite).map_err(E::custom)
                    }

                    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<$ty, E> {
                        if v == "INF" {
                            Ok($ty::Infinite)
                        } else {
                            v.parse::<$inner>().map($ty::Finite).map_err(E::custom)
                        }
                    }
                }
                d.deserialize_any(V)
            }
        }
    };
}

extended_serde!(Distance, u32);
extended_serde!(WienerIndex, u128);

/// Checked `i128` arithmetic; any overflow poisons the result.
#[derive(Debug, Clone, Copy)]
struct Wide(Option<i128>);

impl Wide {
    fn of(x: impl Into<i128>) -> Self {
        Wide(Some(x.into()))
    }

    fn pow(base: i128, exp: u32) -> Self {
        Wide(base.checked_pow(exp))
    }

    fn half(self) -> Self {
        Wide(self.0.map(|x| {
            debug_assert!(x % 2 == 0, "odd numerator {x}");
            x / 2
        }))
    }

    fn unsigned(self, n: u64) -> Result<u128> {
        self.0
            .and_then(|x| u128::try_from(x).ok())
            .ok_or(Error::Overflow(n))
    }
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_add(b)))
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_sub(b)))
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_mul(b)))
    }
}

/// Closed-form inputs: `phi(n)`, `k`, `r`.
struct Params {
    n: u64,
    phi: Wide,
    k: u32,
    r: Wide,
}

fn params(fact: &Factorization) -> Result<Params> {
    let n = fact.n();
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    Ok(Params {
        n,
        phi: Wide::of(euler_phi(fact)),
        k: fact.k_total() as u32,
        r: Wide::of(count_self_inverse_closed(fact)?),
    })
}

fn require_two_primes(fact: &Factorization) -> Result<()> {
    if fact.k_total() < 2 {
        return Err(Error::NeedsTwoPrimes {
            n: fact.n(),
            k: fact.k_total(),
        });
    }
    Ok(())
}

/// Distance between two vertices from the four-case analysis: 1 if adjacent,
/// 3 for non-adjacent vertices of the `e = 1` block, 2 otherwise.
pub fn distance_closed(v: Vertex, w: Vertex, ring: &RingData) -> Result<Distance> {
    require_two_primes(&ring.fact)?;
    let n = ring.n();
    for x in [v, w] {
        let valid = x.e != 0
            && ring.idempotents.binary_search(&x.e).is_ok()
            && ring.units.binary_search(&x.u).is_ok();
        if !valid {
            return Err(Error::InvalidVertex { e: x.e, u: x.u, n });
        }
    }
    if v == w {
        return Ok(Distance::Finite(0));
    }
    let d = if mul_mod(v.e, w.e, n) == 0 || mul_mod(v.u, w.u, n) == 1 {
        1
    } else if v.e == 1 && w.e == 1 {
        3
    } else {
        2
    };
    Ok(Distance::Finite(d))
}

const UNREACHED: u32 = u32::MAX;

/// BFS from `source` into `dist`; returns the number of vertices reached.
fn bfs_into(adj: &[Vec<u32>], source: usize, dist: &mut [u32], queue: &mut Vec<u32>) -> usize {
    dist.fill(UNREACHED);
    queue.clear();
    dist[source] = 0;
    queue.push(source as u32);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head] as usize;
        head += 1;
        let next = dist[x] + 1;
        for &y in &adj[x] {
            if dist[y as usize] == UNREACHED {
                dist[y as usize] = next;
                queue.push(y);
            }
        }
    }
    queue.len()
}

/// Unweighted shortest-path distances from `source`.
pub fn bfs_distances(g: &CleanGraph, source: usize) -> Result<Vec<Distance>> {
    let len = g.vertex_count();
    if source >= len {
        return Err(Error::IndexOutOfRange { index: source, len });
    }
    let mut dist = vec![0; len];
    bfs_into(
        g.adjacency_lists(),
        source,
        &mut dist,
        &mut Vec::with_capacity(len),
    );
    Ok(dist
        .into_iter()
        .map(|d| {
            if d == UNREACHED {
                Distance::Infinite
            } else {
                Distance::Finite(d)
            }
        })
        .collect())
}

/// Wiener index and diameter from one all-source BFS sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceSummary {
    pub wiener: WienerIndex,
    pub diameter: Distance,
}

/// All-source BFS over an arbitrary adjacency structure. Sources are
/// processed in parallel and combined by sum and max.
pub fn distance_summary_of(adj: &[Vec<u32>]) -> DistanceSummary {
    let len = adj.len();
    if len == 0 {
        return DistanceSummary {
            wiener: WienerIndex::Finite(0),
            diameter: Distance::Finite(0),
        };
    }
    let mut dist = vec![0; len];
    if bfs_into(adj, 0, &mut dist, &mut Vec::with_capacity(len)) < len {
        return DistanceSummary {
            wiener: WienerIndex::Infinite,
            diameter: Distance::Infinite,
        };
    }
    let (sum, ecc) = (0..len)
        .into_par_iter()
        .map_init(
            || (vec![0u32; len], Vec::with_capacity(len)),
            |(dist, queue), s| {
                bfs_into(adj, s, dist, queue);
                // each unordered pair once
                let sum: u64 = dist[s + 1..].iter().map(|&d| d as u64).sum();
                let ecc = dist.iter().copied().max().unwrap_or(0);
                (sum as u128, ecc)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    DistanceSummary {
        wiener: WienerIndex::Finite(sum),
        diameter: Distance::Finite(ecc),
    }
}

pub fn distance_summary(g: &CleanGraph) -> DistanceSummary {
    distance_summary_of(g.adjacency_lists())
}

pub fn diameter(g: &CleanGraph) -> Distance {
    distance_summary(g).diameter
}

/// Sum of BFS distances over all unordered vertex pairs.
pub fn wiener_bruteforce(g: &CleanGraph) -> WienerIndex {
    distance_summary(g).wiener
}

/// Diameter predicted from the factorisation: 3 when `n` has at least two
/// distinct primes, infinite for a prime power. `n = 2` is the single-vertex
/// graph.
pub fn diameter_closed(fact: &Factorization) -> Result<Distance> {
    let n = fact.n();
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    Ok(match (n, fact.k_total()) {
        (2, _) => Distance::Finite(0),
        (_, 1) => Distance::Infinite,
        _ => Distance::Finite(3),
    })
}

/// `W = [phi^2 (2*4^k - 5*2^k + 5) - phi (4^k - 2^k + 3) + 2^k r] / 2`,
/// infinite for prime powers.
pub fn wiener_closed(fact: &Factorization) -> Result<WienerIndex> {
    let p = params(fact)?;
    if p.n == 2 {
        return Ok(WienerIndex::Finite(0));
    }
    if p.k < 2 {
        return Ok(WienerIndex::Infinite);
    }
    let two_k = Wide::pow(2, p.k);
    let four_k = Wide::pow(4, p.k);
    let c = Wide::of;
    let bracket = p.phi * p.phi * (c(2) * four_k - c(5) * two_k + c(5))
        - p.phi * (four_k - two_k + c(3))
        + two_k * p.r;
    Ok(WienerIndex::Finite(bracket.half().unsigned(p.n)?))
}

/// The Wiener index split by vertex-pair class.
///
/// `s1`: both ends in the `e = 1` block. `s2`: both ends in one other block.
/// `s3`: one end in the `e = 1` block. `s4`: ends in two different blocks,
/// neither the `e = 1` block; `t1` covers complementary block pairs
/// (`e + f = 1`), `t2` the remaining pairs with `uv = 1`, `t3` the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WienerDecomposition {
    pub s1: u128,
    pub s2: u128,
    pub s3: u128,
    pub s4: u128,
    pub t1: u128,
    pub t2: u128,
    pub t3: u128,
    pub total: u128,
}

impl WienerDecomposition {
    pub fn from_parts(s1: u128, s2: u128, s3: u128, t1: u128, t2: u128, t3: u128) -> Self {
        let s4 = t1 + t2 + t3;
        WienerDecomposition {
            s1,
            s2,
            s3,
            s4,
            t1,
            t2,
            t3,
            total: s1 + s2 + s3 + s4,
        }
    }

    pub fn components(&self) -> [(&'static str, u128); 7] {
        [
            ("S1", self.s1),
            ("S2", self.s2),
            ("S3", self.s3),
            ("S4", self.s4),
            ("T1", self.t1),
            ("T2", self.t2),
            ("T3", self.t3),
        ]
    }
}

/// Terms shared by the published and corrected decompositions.
fn within_and_unit_block_terms(p: &Params) -> (Wide, Wide, Wide, Wide) {
    let c = Wide::of;
    let (phi, r) = (p.phi, p.r);
    let two_k = Wide::pow(2, p.k);
    let half_blocks = Wide::pow(2, p.k - 1) - c(1);
    let s1 = (c(3) * phi * phi - c(5) * phi + c(2) * r).half();
    let s2 = half_blocks * (c(2) * phi * phi - c(3) * phi + r);
    let s3 = (two_k - c(2)) * (c(2) * phi * phi - phi);
    let t1 = phi * phi * half_blocks;
    (s1, s2, s3, t1)
}

/// Class sums from the published derivation. `t2` and `t3` share the factor
/// `2^(2k-1) - 2^(k+1) - (2^(k-2) - 1)(2^k + 2)`, which vanishes at `k = 2`.
pub fn wiener_decomposition_closed(fact: &Factorization) -> Result<WienerDecomposition> {
    require_two_primes(fact)?;
    let p = params(fact)?;
    let c = Wide::of;
    let (s1, s2, s3, t1) = within_and_unit_block_terms(&p);
    let pair_factor = Wide::pow(2, 2 * p.k - 1)
        - Wide::pow(2, p.k + 1)
        - (Wide::pow(2, p.k - 2) - c(1)) * (Wide::pow(2, p.k) + c(2));
    let t2 = c(2) * p.phi * pair_factor;
    let t3 = (c(4) * p.phi * p.phi - c(4) * p.phi) * pair_factor;
    let n = p.n;
    Ok(WienerDecomposition::from_parts(
        s1.unsigned(n)?,
        s2.unsigned(n)?,
        s3.unsigned(n)?,
        t1.unsigned(n)?,
        t2.unsigned(n)?,
        t3.unsigned(n)?,
    ))
}

/// Class sums with annihilating non-complementary block pairs counted at
/// distance 1. Nontrivial idempotents correspond to nonempty proper subsets
/// of the `k` primes and `ef = 0` iff the subsets are disjoint, so there are
/// `(3^k - 2^(k+1) + 1) / 2` annihilating pairs, `2^(k-1) - 1` of them
/// complementary.
pub fn wiener_decomposition_corrected(fact: &Factorization) -> Result<WienerDecomposition> {
    require_two_primes(fact)?;
    let p = params(fact)?;
    let c = Wide::of;
    let (s1, s2, s3, t1) = within_and_unit_block_terms(&p);
    let complementary = Wide::pow(2, p.k - 1) - c(1);
    let nontrivial = Wide::pow(2, p.k) - c(2);
    let all_pairs = (nontrivial * (nontrivial - c(1))).half();
    let annihilating = (Wide::pow(3, p.k) - Wide::pow(2, p.k + 1) + c(1)).half() - complementary;
    let other_pairs = all_pairs - complementary;
    let t2 = other_pairs * p.phi;
    let non_inverse = p.phi * p.phi - p.phi;
    let t3 = non_inverse * (annihilating + c(2) * (other_pairs - annihilating));
    let n = p.n;
    Ok(WienerDecomposition::from_parts(
        s1.unsigned(n)?,
        s2.unsigned(n)?,
        s3.unsigned(n)?,
        t1.unsigned(n)?,
        t2.unsigned(n)?,
        t3.unsigned(n)?,
    ))
}

/// Exact closed form for the Wiener index, valid for every `k`.
pub fn wiener_closed_corrected(fact: &Factorization) -> Result<WienerIndex> {
    if fact.k_total() < 2 {
        return wiener_closed(fact);
    }
    Ok(WienerIndex::Finite(
        wiener_decomposition_corrected(fact)?.total,
    ))
}

/// Class sums from BFS distances over the built graph.
pub fn wiener_decomposition_oracle(g: &CleanGraph) -> Result<WienerDecomposition> {
    if g.includes_zero_block() {
        return Err(Error::ZeroBlockUnsupported);
    }
    let adj = g.adjacency_lists();
    let len = g.vertex_count();
    let n = g.n();
    let unit_block = g.unit_block();
    let vs = g.vertices();
    let mut probe = vec![0; len];
    if bfs_into(adj, 0, &mut probe, &mut Vec::new()) < len {
        return Err(Error::Disconnected);
    }
    let sums = (0..len)
        .into_par_iter()
        .map_init(
            || (vec![0u32; len], Vec::with_capacity(len)),
            |(dist, queue), i| {
                bfs_into(adj, i, dist, queue);
                let mut acc = [0u64; 6];
                let bi = g.block_of(i);
                for j in i + 1..len {
                    let bj = g.block_of(j);
                    let d = dist[j] as u64;
                    let class = if bi == bj {
                        if bi == unit_block {
                            0
                        } else {
                            1
                        }
                    } else if bi == unit_block || bj == unit_block {
                        2
                    } else if (vs[i].e + vs[j].e) % n == 1 % n {
                        3
                    } else if mul_mod(vs[i].u, vs[j].u, n) == 1 {
                        4
                    } else {
                        5
                    };
                    acc[class] += d;
                }
                acc
            },
        )
        .reduce(
            || [0; 6],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let [s1, s2, s3, t1, t2, t3] = sums.map(u128::from);
    Ok(WienerDecomposition::from_parts(s1, s2, s3, t1, t2, t3))
}

/// Power of two dividing `n`, as the rows of the coefficient table split it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityCase {
    /// `n` odd.
    Odd,
    /// `n = 2 * odd`.
    TwiceOdd,
    /// `n = 4 * odd`.
    FourTimesOdd,
    /// `8 | n`.
    EightDivides,
}

impl ParityCase {
    pub fn of(fact: &Factorization) -> Self {
        match fact.two_adic() {
            0 => ParityCase::Odd,
            1 => ParityCase::TwiceOdd,
            2 => ParityCase::FourTimesOdd,
            _ => ParityCase::EightDivides,
        }
    }

    /// Self-inverse unit count for `k` distinct primes in this case.
    pub fn self_inverse_count(self, k: u32) -> u64 {
        let odd = if self == ParityCase::Odd { k } else { k - 1 };
        let extra = match self {
            ParityCase::Odd | ParityCase::TwiceOdd => 0,
            ParityCase::FourTimesOdd => 1,
            ParityCase::EightDivides => 2,
        };
        1 << (odd + extra)
    }
}

/// `(a, b, c)` with `W = (a x^2 - b x + c) / 2`, `x = phi(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Coefficients {
    /// Evaluate at `x = phi(n)`. `phi(n)` is even for `n >= 3`, which keeps
    /// the numerator even for every row of interest.
    pub fn evaluate(&self, x: u64) -> i128 {
        let x = x as i128;
        (self.a as i128 * x * x - self.b as i128 * x + self.c as i128) / 2
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn check_table_k(k: u32) -> Result<()> {
    if !(2..=8).contains(&k) {
        return Err(Error::UnsupportedPrimeCount(k));
    }
    Ok(())
}

/// Coefficients of the published closed form for `k` primes.
pub fn coefficient_table(k: u32, parity: ParityCase) -> Result<Coefficients> {
    check_table_k(k)?;
    let two_k = 1i64 << k;
    let four_k = two_k * two_k;
    Ok(Coefficients {
        a: 2 * four_k - 5 * two_k + 5,
        b: four_k - two_k + 3,
        c: two_k * parity.self_inverse_count(k) as i64,
    })
}

/// Coefficients of [`wiener_closed_corrected`] for `k` primes.
pub fn corrected_coefficient_table(k: u32, parity: ParityCase) -> Result<Coefficients> {
    check_table_k(k)?;
    let two_k = 1i64 << k;
    let complementary = two_k / 2 - 1;
    let nontrivial = two_k - 2;
    let all_pairs = nontrivial * (nontrivial - 1) / 2;
    let annihilating = (3i64.pow(k) - 2 * two_k + 1) / 2;
    let distance_two_pairs = all_pairs - annihilating;
    Ok(Coefficients {
        a: 3 + 4 * complementary + 4 * nontrivial + 2 * annihilating + 4 * distance_two_pairs,
        b: 5 + 6 * complementary + 2 * nontrivial + 2 * distance_two_pairs,
        c: two_k * parity.self_inverse_count(k) as i64,
    })
}
