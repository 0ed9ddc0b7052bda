use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex labels must be positive")]
    ZeroLabel,
    #[error("invalid tree: {0}")]
    InvalidTree(&'static str),
    #[error("vertex not in tree")]
    VertexNotInTree,
    #[error("attachment point is not a leaf")]
    NotALeaf,
    #[error("tree too small")]
    TreeTooSmall,
    #[error("exhaustion bound exceeded: {requested} > {max}")]
    ExhaustionBound { requested: usize, max: usize },
    #[error("not 321-avoiding")]
    NotAvoiding,
    #[error("not critical: offspring mean is {mean}")]
    NotCritical { mean: f64 },
    #[error("offspring pmf is not a probability distribution: {0}")]
    BadDistribution(&'static str),
    #[error("horizon cap exceeded while evaluating a spine query")]
    HorizonCapExceeded,
    #[error("side tree exceeded the vertex cap during spine growth")]
    SideTreeOverflow,
    #[error("window length {k} exceeds permutation length {n}")]
    WindowTooLong { k: usize, n: usize },
    #[error("{0}")]
    BadInput(String),
    #[error("malformed permutation: {0}")]
    BadPermutation(&'static str),
    #[error("malformed tree encoding: {0}")]
    BadEncoding(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
