use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: usize, v: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("edge ({u}, {v}) has non-positive or non-finite weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },

    #[error("node id {id} out of range for {n} nodes")]
    IdOutOfRange { id: usize, n: usize },

    #[error("graph is disconnected")]
    GraphDisconnected,

    #[error("edge set is not a spanning tree: {0}")]
    NotASpanningTree(&'static str),

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("graph rank {rank} exceeds enumeration cap {cap}")]
    RankTooLarge { rank: usize, cap: usize },

    #[error("matrix is not symmetric (|a[{i}][{j}] - a[{j}][{i}]| = {gap:e})")]
    NotSymmetric { i: usize, j: usize, gap: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("need at least {needed} nodes, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("invalid size {n} for this graph family")]
    InvalidN { n: usize },

    #[error("empty input")]
    Empty,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component of {0} node(s) is below the minimum size")]
    SingletonComponent(usize),

    #[error("no edge between nodes {0} and {1}")]
    NoSuchEdge(usize, usize),

    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdgeInRequest(usize, usize),

    #[error("(lambda, x) is not an eigenpair (residual {residual:e})")]
    NotAnEigenpair { residual: f64 },

    #[error("bisection is unbalanced: sides of size {0} and {1}")]
    Unbalanced(usize, usize),

    #[error("no swap prefix keeps both components at or above the threshold")]
    NoFeasibleK,

    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("invalid weight range [{min}, {max}]")]
    BadWeightRange { min: f64, max: f64 },

    #[error("no connected sample after {0} attempts")]
    CannotConnect(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
