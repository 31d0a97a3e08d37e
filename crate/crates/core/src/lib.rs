//! Bootstrap percolation on the hypercube `{0,1}^d`.
//!
//! The crate provides:
//! - [`hypercube`]: vertices, Hamming geometry, coordinate permutations and
//!   XOR translations, vertex-set files;
//! - [`dsl`]: a small pattern language for subcubes (`[1,0,*]`, concatenation,
//!   powers, the `~(...)` block-permutation operator, unions);
//! - [`engine`]: the synchronous r-neighbour infection dynamics with
//!   per-vertex infection times;
//! - [`snake`]: spread-k snakes (circuit codes as paths), validation and
//!   exhaustive/budgeted longest-snake search with symmetry breaking;
//! - [`construction`]: the slow-percolation witness built from a 3-snake,
//!   its structural audits and trajectory/percolation checks, and the two
//!   dimension-lifting reductions;
//! - [`extremal`]: brute-force maximal percolation time at tiny `d`, the
//!   `(4r+2)·2^d/d` upper-bound check, and seeded Monte Carlo statistics.

pub mod construction;
pub mod dsl;
pub mod engine;
pub mod extremal;
pub mod hypercube;
pub mod snake;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} out of range 1..=63")]
    DimensionRange(u32),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("dimension {d} exceeds dense-state cap {cap}; use the allow-large override to proceed")]
    DenseCap { d: u32, cap: u32 },
    #[error("exhaustive search guard: d={d} too large for k={k}; use the allow-large override to proceed")]
    SearchGuard { d: u32, k: u32 },
    #[error("brute-force guard: d={0} too large; use the allow-large override to proceed")]
    BruteForceGuard(u32),
    #[error("invalid vertex text {text:?}: {reason}")]
    VertexText { text: String, reason: String },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("invalid snake: {0}")]
    Snake(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
