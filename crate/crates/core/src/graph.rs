//! Construction of the clean graph `Cl2(Z_n)`.
//!
//! Vertices are `(e, u)` with `e` a nonzero idempotent and `u` a unit. Two
//! distinct vertices `(e, u)`, `(f, v)` are adjacent iff `ef = 0` or `uv = 1`.
//! Vertices are stored block-major: one contiguous block of `phi(n)` vertices
//! per idempotent, idempotents ascending, units ascending inside a block.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{mod_inverse, mul_mod, RingData};

pub const DEFAULT_VERTEX_CAP: usize = 50_000;

/// Above this many vertices only the adjacency lists are kept.
pub const BIT_MATRIX_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub e: u64,
    pub u: u64,
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.e, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Add the `e = 0` block, giving the full clean graph `Cl(Z_n)`.
    pub include_zero_block: bool,
    pub vertex_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            include_zero_block: false,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Packed symmetric adjacency matrix, one bit per ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(size: usize) -> Self {
        let words_per_row = size.div_ceil(64);
        BitMatrix {
            words_per_row,
            bits: vec![0; words_per_row * size],
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanGraph {
    ring: RingData,
    include_zero_block: bool,
    vertices: Vec<Vertex>,
    blocks: Vec<Range<usize>>,
    adjacency: Vec<Vec<u32>>,
    matrix: Option<BitMatrix>,
}

/// Number of vertices `Cl2(Z_n)` (or `Cl(Z_n)`) would have.
pub fn vertex_count(ring: &RingData, include_zero_block: bool) -> u64 {
    let blocks = ring.idempotents.len() as u64 - u64::from(!include_zero_block);
    blocks * ring.phi
}

/// Build `Cl2(Z_n)`, or `Cl(Z_n)` when the zero block is requested.
pub fn build_cl2(n: u64, opts: BuildOptions) -> Result<CleanGraph> {
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    let ring = RingData::new(n)?;
    CleanGraph::from_ring(ring, opts)
}

impl CleanGraph {
    pub fn from_ring(ring: RingData, opts: BuildOptions) -> Result<Self> {
        let n = ring.n();
        if n < 2 {
            return Err(Error::ModulusTooSmall { n, min: 2 });
        }
        let expected = vertex_count(&ring, opts.include_zero_block);
        if expected > opts.vertex_cap as u64 {
            return Err(Error::VertexCapExceeded {
                vertices: expected,
                cap: opts.vertex_cap,
            });
        }

        let block_idempotents: Vec<u64> = ring
            .idempotents
            .iter()
            .copied()
            .filter(|&e| opts.include_zero_block || e != 0)
            .collect();
        let mut vertices = Vec::with_capacity(expected as usize);
        let mut blocks = Vec::with_capacity(block_idempotents.len());
        for &e in &block_idempotents {
            let start = vertices.len();
            vertices.extend(ring.units.iter().map(|&u| Vertex { e, u }));
            blocks.push(start..vertices.len());
        }

        // position of u^{-1} inside the unit list
        let inverse_slot: Vec<usize> = ring
            .units
            .iter()
            .map(|&u| {
                let inv = mod_inverse(u, n).expect("unit");
                ring.units.binary_search(&inv).expect("inverse is a unit")
            })
            .collect();

        let nb = block_idempotents.len();
        let annihilates: Vec<bool> = (0..nb * nb)
            .map(|x| mul_mod(block_idempotents[x / nb], block_idempotents[x % nb], n) == 0)
            .collect();

        let mut adjacency = Vec::with_capacity(vertices.len());
        for (a, block_a) in blocks.iter().enumerate() {
            for (slot, &inv) in inverse_slot.iter().enumerate() {
                let me = block_a.start + slot;
                let mut nbrs = Vec::new();
                for (b, block_b) in blocks.iter().enumerate() {
                    if annihilates[a * nb + b] {
                        nbrs.extend(block_b.clone().filter(|&j| j != me).map(|j| j as u32));
                    } else {
                        let j = block_b.start + inv;
                        if j != me {
                            nbrs.push(j as u32);
                        }
                    }
                }
                adjacency.push(nbrs);
            }
        }

        let matrix = (vertices.len() <= BIT_MATRIX_LIMIT).then(|| {
            let mut m = BitMatrix::new(vertices.len());
            for (i, nbrs) in adjacency.iter().enumerate() {
                for &j in nbrs {
                    m.set(i, j as usize);
                }
            }
            m
        });

        Ok(CleanGraph {
            ring,
            include_zero_block: opts.include_zero_block,
            vertices,
            blocks,
            adjacency,
            matrix,
        })
    }

    pub fn n(&self) -> u64 {
        self.ring.n()
    }

    pub fn ring(&self) -> &RingData {
        &self.ring
    }

    pub fn includes_zero_block(&self) -> bool {
        self.include_zero_block
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Index of the block containing vertex `i`.
    pub fn block_of(&self, i: usize) -> usize {
        i / self.ring.units.len()
    }

    /// Block of the vertices with idempotent 1.
    pub fn unit_block(&self) -> usize {
        usize::from(self.include_zero_block)
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    pub fn adjacency_lists(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn vertex_index(&self, v: Vertex) -> Option<usize> {
        let block = self
            .blocks
            .iter()
            .position(|b| self.vertices[b.start].e == v.e)?;
        let slot = self.ring.units.binary_search(&v.u).ok()?;
        Some(self.blocks[block].start + slot)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> Result<bool> {
        let len = self.vertices.len();
        for index in [i, j] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        Ok(match &self.matrix {
            Some(m) => m.get(i, j),
            None => self.adjacency[i].binary_search(&(j as u32)).is_ok(),
        })
    }

    /// The defining rule, evaluated directly from the vertex labels.
    pub fn adjacency_rule(&self, i: usize, j: usize) -> bool {
        let n = self.n();
        let (a, b) = (self.vertices[i], self.vertices[j]);
        i != j && (mul_mod(a.e, b.e, n) == 0 || mul_mod(a.u, b.u, n) == 1 % n)
    }

    /// Edges `(i, j)` with `i < j`, ordered by `i` then `j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            nbrs.iter()
                .map(move |&j| (i, j as usize))
                .filter(|&(i, j)| i < j)
        })
    }
}
