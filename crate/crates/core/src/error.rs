use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a Steiner triple system order (need n = 1 or 3 mod 6, n >= 3)")]
    InvalidOrder(u32),

    #[error("invalid triple {vertices:?} for order {order}")]
    InvalidTriple { vertices: [u32; 3], order: u32 },

    #[error("pair {{{}, {}}} is covered {count} times (expected exactly once)", pair.0, pair.1)]
    PairCoverage { pair: (u32, u32), count: u32 },

    #[error("invalid colouring: {0}")]
    InvalidColouring(String),

    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: u32, found: u32 },

    #[error("empty domain: {0}")]
    EmptyDomain(&'static str),

    #[error("order {order} is not supported here: {reason}")]
    Infeasible { order: u32, reason: &'static str },

    #[error("the {construction} construction needs {requirement}, got n = {order}")]
    ConstructionDomain {
        construction: &'static str,
        requirement: &'static str,
        order: u32,
    },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(u32),

    #[error("vertex {vertex} is out of range for order {order}")]
    InvalidSubset { vertex: u32, order: u32 },

    #[error("{0}")]
    Domain(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
