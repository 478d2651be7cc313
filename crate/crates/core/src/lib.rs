//! The clean graph `Cl2(Z_n)`: vertices `(e, u)` with `e` a nonzero
//! idempotent and `u` a unit of `Z_n`, adjacent when `ef = 0` or `uv = 1`.
//!
//! The crate builds the graph, evaluates closed forms for its diameter,
//! Wiener index and matching number, and checks each one against a
//! brute-force oracle (BFS distances, blossom matching) on the built graph.

pub mod error;
pub mod export;
pub mod graph;
pub mod matching;
pub mod metrics;
pub mod report;
pub mod ring;
pub mod scan;
pub mod tables;

pub use error::{Error, Result};
pub use graph::{build_cl2, BuildOptions, CleanGraph, Vertex};
pub use matching::{
    construct_perfect_matching, matching_number_closed, maximum_matching, verify_matching, Matching,
};
pub use metrics::{Distance, WienerDecomposition, WienerIndex};
pub use ring::{factorize, Factorization, RingData};
