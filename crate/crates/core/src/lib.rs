//! Construction and certification of greedy (1+eps)-spanners on weighted
//! graphs, with an emphasis on graphs of bounded pathwidth.
//!
//! The crate is organized around three layers:
//!
//! * exact-arithmetic graph primitives ([`graph`]): rational edge weights,
//!   Kruskal MST with a fixed tie-break, exact shortest paths;
//! * the greedy spanner and its verifiers ([`spanner`]), path decompositions
//!   and the normalized per-bag graph ([`pathdec`]), charging schemes and
//!   their simplicity/acyclicity verifier ([`charging`]);
//! * the charging-forest construction for k-paths ([`forest`]) which builds
//!   an O(pw^2)-simple charging scheme bag by bag, plus the end-to-end
//!   pipeline ([`pipeline`]) and instance generators ([`generators`]).
//!
//! All weight arithmetic is exact (`num_rational::BigRational`); nothing in
//! the crate compares floating point numbers. Every randomized routine takes
//! an explicit seed and is deterministic given it.

pub mod charging;
pub mod forest;
pub mod formats;
pub mod generators;
pub mod graph;
pub mod pathdec;
pub mod pipeline;
pub mod spanner;

/// Crate-wide error type.
///
/// `InvalidInput` covers precondition violations on operation inputs,
/// `Format` covers file parse errors (with a 1-based line number),
/// `Structural` covers broken internal structure discovered mid-operation
/// (e.g. a charging path that does not connect its edge's endpoints), and
/// `Refused` covers certificates that cannot be issued because a
/// verification verdict is negative.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("certificate refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}
