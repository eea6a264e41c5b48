use thiserror::Error;

/// Errors produced by grid construction, operator assembly and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite potential sample {value} at index {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("barrier [{lo}, {hi}] not strictly inside grid ({xmin}, {xmax})")]
    BarrierOutsideDomain {
        lo: f64,
        hi: f64,
        xmin: f64,
        xmax: f64,
    },

    #[error("eigensolver failed to converge for level {index} after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("levels are not sorted ascending at index {0}")]
    UnsortedLevels(usize),

    #[error(
        "grid too coarse: residual {residual:e} exceeds its second-order bound estimate {bound:e}"
    )]
    GridTooCoarse { residual: f64, bound: f64 },

    #[error("grid does not match the requested domain: {0}")]
    GridMismatch(String),

    #[error("operator does not commute with the symmetry (probe norm {0:e})")]
    NotASymmetry(f64),

    #[error("symmetry inconsistency: {0}")]
    SymmetryInconsistent(String),

    #[error("states are collinear (|<A|B>| = {0}), pair undefined")]
    CollinearStates(f64),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("states are not orthogonal (<L|R> = {0:e})")]
    NotOrthogonal(f64),

    #[error("state vanishes on both half-lines, projection undefined")]
    ZeroState,

    #[error("grid under-resolves the state: {0}")]
    UnderResolved(String),
}

pub type Result<T> = std::result::Result<T, Error>;
