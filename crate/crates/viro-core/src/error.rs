//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by polytope, triangulation, and patchworking operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data does not describe a valid polytope (empty vertex set,
    /// inconsistent coordinate lengths, ...).
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    /// A point/simplex/triangulation input is malformed or out of range.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A set of simplices is not a triangulation of the claimed polytope.
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    /// A lifting function fails to certify convexity of a subdivision.
    #[error("lifting is not strictly convex: {0}")]
    NotConvex(String),

    /// A requested operation is outside the supported range of this build.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Search for a certificate (convex lifting, anchor vertex, ...) failed.
    #[error("search failed: {0}")]
    SearchFailed(String),

    /// I/O failure while reading or writing files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
