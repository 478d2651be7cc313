use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("empty range: {min} > {max}")]
    EmptyRange { min: u64, max: u64 },

    #[error("modulus {n} exceeds the supported bound {max}")]
    ModulusTooLarge { n: u64, max: u64 },

    #[error("operation requires n >= {min}, got {n}")]
    ModulusTooSmall { n: u64, min: u64 },

    #[error("{u} is not a unit modulo {n}")]
    NotAUnit { u: u64, n: u64 },

    #[error("({e},{u}) is not a vertex of Cl2(Z_{n})")]
    InvalidVertex { e: u64, u: u64, n: u64 },

    #[error("graph would have {vertices} vertices, above the cap of {cap}")]
    VertexCapExceeded { vertices: u64, cap: usize },

    #[error("n = {n} has {k} distinct prime factor(s); this result needs at least 2")]
    NeedsTwoPrimes { n: u64, k: usize },

    #[error("the graph includes the zero-idempotent block; closed forms cover Cl2 only")]
    ZeroBlockUnsupported,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("integer overflow while evaluating a closed form for n = {0}")]
    Overflow(u64),

    #[error("vertex index {index} out of range for a graph with {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("k = {0} is outside the supported range [2, 8]")]
    UnsupportedPrimeCount(u32),

    #[error("imported graph does not match Cl2(Z_n): {0}")]
    GraphMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
