//! Exact-arithmetic toolkit for distribution-free symmetrization inequalities.
//!
//! For i.i.d. random variables `X, Y` and centered norm balls `F, K`, the
//! library computes `P(X+Y ∈ F)` and `P(X−Y ∈ K)` exactly over finite
//! discrete distributions, evaluates the covering-number constants that
//! bound their ratio, reconstructs the extremal distribution family that
//! attains the sharp one-dimensional constant `⌈2b/a⌉`, and searches
//! adversarially for worst-case weight vectors on a fixed support.
//!
//! Every reported verdict and ratio is computed in rational arithmetic;
//! floating point is confined to search heuristics and Monte Carlo
//! sampling.

pub mod covering;
pub mod error;
pub mod extremal;
pub mod measure;
pub mod rational;
pub mod search;

pub use error::SymmetrizeError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SymmetrizeError>;
