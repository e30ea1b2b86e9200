use thiserror::Error;

/// Errors surfaced by the enumeration engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("side lengths must be non-negative, got ({0}, {1}, {2})")]
    NegativeSide(i64, i64, i64),

    #[error("triangle ({0}, {1}, {2}) is not part of the region")]
    TriangleOutOfRegion(i32, i32, i32),

    #[error("box {dims:?} is not fixed by symmetry class {class}")]
    BoxNotFixed { class: u8, dims: (u32, u32, u32) },

    #[error("invalid symmetry class id {0} (expected 1..=10)")]
    InvalidClass(u8),

    #[error("embedding check failed: {0}")]
    Embedding(String),

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("graph has an odd number of vertices ({0})")]
    OddVertexCount(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension {dim} exceeds the limit {limit} for {what}")]
    DimensionLimit { what: &'static str, dim: usize, limit: usize },

    #[error("value is not a perfect square")]
    NotPerfectSquare,

    #[error("inexact division in {0}")]
    InexactDivision(&'static str),

    #[error("dims {dims:?} are outside the supported patterns for class {class}")]
    UnsupportedPattern { class: u8, dims: (u32, u32, u32) },

    #[error("method {method} does not support {what}")]
    UnsupportedMethod { method: String, what: String },

    #[error("graph has {vertices} vertices, more than the enumeration limit {limit}")]
    SizeLimit { vertices: usize, limit: usize },

    #[error("invalid plane partition: {0}")]
    InvalidPartition(String),

    #[error("edge set is not a perfect matching: {0}")]
    NotPerfectMatching(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
