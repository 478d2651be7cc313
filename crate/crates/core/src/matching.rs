//! Maximum matchings of `Cl2(Z_n)`.
//!
//! The graph contains odd cliques (all blocks at a fixed self-inverse unit),
//! so the oracle is a general-graph augmenting-path search with blossom
//! contraction rather than a bipartite method.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CleanGraph, Vertex};
use crate::ring::{euler_phi, mul_mod, Factorization};

pub const DEFAULT_BLOSSOM_CAP: usize = 5_000;

/// A set of vertex-index pairs, each stored as `(smaller, larger)` and kept
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<_> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        Matching { pairs }
    }

    /// Build from a mate array (`mate[v] = Some(w)` iff `v` and `w` are matched).
    pub fn from_mates(mates: &[Option<usize>]) -> Self {
        Self::from_pairs(
            mates
                .iter()
                .enumerate()
                .filter_map(|(v, &m)| m.filter(|&w| v < w).map(|w| (v, w))),
        )
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn labelled(&self, g: &CleanGraph) -> Vec<(Vertex, Vertex)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (g.vertices()[a], g.vertices()[b]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCheck {
    pub valid: bool,
    pub perfect: bool,
}

pub fn verify_matching(g: &CleanGraph, m: &Matching) -> MatchingCheck {
    let len = g.vertex_count();
    let mut seen = HashSet::with_capacity(2 * m.size());
    let valid = m.pairs().iter().all(|&(a, b)| {
        a != b
            && a < len
            && b < len
            && g.adjacent(a, b).unwrap_or(false)
            && seen.insert(a)
            && seen.insert(b)
    });
    MatchingCheck {
        valid,
        perfect: valid && 2 * m.size() == len,
    }
}

/// Edmonds' blossom algorithm on plain adjacency lists. Returns the mate of
/// every vertex.
pub fn blossom_mates(adj: &[Vec<u32>]) -> Vec<Option<usize>> {
    Blossom::new(adj).run()
}

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<u32>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    in_tree: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<u32>]) -> Self {
        let len = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; len],
            parent: vec![NONE; len],
            base: (0..len).collect(),
            in_tree: vec![false; len],
            in_blossom: vec![false; len],
            on_path: vec![false; len],
            queue: Vec::with_capacity(len),
        }
    }

    fn run(mut self) -> Vec<Option<usize>> {
        let len = self.adj.len();
        // greedy start
        for v in 0..len {
            if self.mate[v] == NONE {
                if let Some(&w) = self.adj[v]
                    .iter()
                    .find(|&&w| self.mate[w as usize] == NONE && w as usize != v)
                {
                    self.mate[v] = w as usize;
                    self.mate[w as usize] = v;
                }
            }
        }
        for root in 0..len {
            if self.mate[root] != NONE {
                continue;
            }
            if let Some(mut v) = self.find_augmenting_path(root) {
                while v != NONE {
                    let pv = self.parent[v];
                    let next = self.mate[pv];
                    self.mate[v] = pv;
                    self.mate[pv] = v;
                    v = next;
                }
            }
        }
        self.mate
            .into_iter()
            .map(|m| (m != NONE).then_some(m))
            .collect()
    }

    fn lowest_common_base(&mut self, mut a: usize, mut b: usize) -> usize {
        self.on_path.fill(false);
        loop {
            a = self.base[a];
            self.on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, stem: usize, mut child: usize) {
        while self.base[v] != stem {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grow an alternating tree from `root`; returns the free vertex ending
    /// an augmenting path, with the path recorded in `parent`.
    fn find_augmenting_path(&mut self, root: usize) -> Option<usize> {
        let len = self.adj.len();
        self.in_tree.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.in_tree[root] = true;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx] as usize;
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    // odd cycle: contract the blossom
                    let stem = self.lowest_common_base(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, stem, to);
                    self.mark_path(to, stem, v);
                    for i in 0..len {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = stem;
                            if !self.in_tree[i] {
                                self.in_tree[i] = true;
                                self.queue.push(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.in_tree[next] = true;
                    self.queue.push(next);
                }
            }
        }
        None
    }
}

/// Maximum-cardinality matching of `g`, refused above `cap` vertices.
pub fn maximum_matching(g: &CleanGraph, cap: usize) -> Result<Matching> {
    let len = g.vertex_count();
    if len > cap {
        return Err(Error::VertexCapExceeded {
            vertices: len as u64,
            cap,
        });
    }
    Ok(Matching::from_mates(&blossom_mates(g.adjacency_lists())))
}

/// `phi(n) (2^k - 1) / 2`, the size of a perfect matching.
pub fn matching_number_closed(fact: &Factorization) -> Result<u64> {
    if fact.k_total() < 2 {
        return Err(Error::NeedsTwoPrimes {
            n: fact.n(),
            k: fact.k_total(),
        });
    }
    let blocks = (1u64 << fact.k_total()) - 1;
    Ok(euler_phi(fact) * blocks / 2)
}

/// A deterministic perfect matching for `n` with at least two distinct primes.
///
/// 1. In every block, `(e,u)` is matched with `(e,u^-1)` for each unit that
///    is not its own inverse.
/// 2. With `e*` the smallest nontrivial idempotent, the self-inverse units
///    are taken in ascending pairs `(u, w)` and `(e*,u)` is matched with
///    `(1-e*,w)`; these are adjacent because `e*(1-e*) = 0`.
/// 3. For each self-inverse unit the `2^k - 2` vertices left in its column
///    are pairwise adjacent (`u*u = 1`) and are matched consecutively in
///    ascending idempotent order.
pub fn construct_perfect_matching(g: &CleanGraph) -> Result<Matching> {
    let ring = g.ring();
    if ring.fact.k_total() < 2 {
        return Err(Error::NeedsTwoPrimes {
            n: ring.n(),
            k: ring.fact.k_total(),
        });
    }
    if g.includes_zero_block() {
        return Err(Error::ZeroBlockUnsupported);
    }
    let n = ring.n();
    let units = &ring.units;
    let phi = units.len();
    let slot = |u: u64| units.binary_search(&u).expect("unit");
    let idempotents = ring.nonzero_idempotents();
    let block = |e: u64| idempotents.binary_search(&e).expect("idempotent");
    let index = |e: u64, u: u64| block(e) * phi + slot(u);

    let mut pairs = Vec::with_capacity(g.vertex_count() / 2);

    for &u in &ring.non_self_inverse_units() {
        let inv = crate::ring::mod_inverse(u, n)?;
        if u < inv {
            for &e in idempotents {
                pairs.push((index(e, u), index(e, inv)));
            }
        }
    }

    let e_star = idempotents[1];
    let co = (n + 1 - e_star) % n;
    debug_assert_eq!(mul_mod(e_star, co, n), 0);
    let mut taken: Vec<(u64, u64)> = Vec::new();
    for chunk in ring.self_inverse_units.chunks(2) {
        let [u, w] = chunk else {
            unreachable!("self-inverse units come in even number for n >= 3")
        };
        pairs.push((index(e_star, *u), index(co, *w)));
        taken.push((*u, e_star));
        taken.push((*w, co));
    }

    for &u in &ring.self_inverse_units {
        let used = taken.iter().find(|&&(x, _)| x == u).map(|&(_, e)| e);
        let column: Vec<usize> = idempotents
            .iter()
            .filter(|&&e| Some(e) != used)
            .map(|&e| index(e, u))
            .collect();
        for pair in column.chunks(2) {
            pairs.push((pair[0], pair[1]));
        }
    }

    Ok(Matching::from_pairs(pairs))
}
