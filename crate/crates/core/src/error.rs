use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("genus must be at least 1 (got {0})")]
    NonPositiveGenus(i64),

    #[error("edge length {index} is not positive")]
    NonPositiveLength { index: usize },

    #[error("expected {expected} edge lengths, got {got}")]
    LengthCount { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("class index k={k} out of range 1..={g}")]
    ClassOutOfRange { k: usize, g: usize },

    #[error("point is not a Voronoi vertex of this tropical Jacobian")]
    NotAVertex,

    #[error("Delaunay equality attained on the boundary shell |c|_inf = 2: {0:?}")]
    DelaunayShellViolation(Vec<i64>),

    #[error("lift coordinate {index} is zero; the point is not a Voronoi vertex")]
    ZeroLiftCoordinate { index: usize },

    #[error("orientation is not strongly connected (all edges point the same way)")]
    NotStronglyConnected,

    #[error("label {0:?} is not a 0/1 vector")]
    LabelNotBinary(Vec<i64>),

    #[error("kappa values must be pairwise distinct (kappa_{i} = kappa_{j})")]
    RepeatedKappa { i: usize, j: usize },

    #[error("kappa values must be strictly increasing")]
    UnsortedKappa,

    #[error("parameter {name}_{index} must be nonzero")]
    ZeroParameter { name: &'static str, index: usize },

    #[error("divisor point p_{index} coincides with a branch point or pole")]
    DivisorPole { index: usize },

    #[error("invalid divisor split: {0}")]
    DivisorSplit(String),

    #[error("invalid subset {0:?} for ground set of size {1}")]
    InvalidSubset(Vec<usize>, usize),

    #[error("degenerate parameters: U_{index} = 0")]
    DegenerateParameters { index: usize },

    #[error("missing coefficient for label {0}")]
    MissingCoefficient(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("tau vanishes at ({x}, {y}, {t})")]
    TauVanishes { x: f64, y: f64, t: f64 },

    #[error("empty tau function")]
    EmptyTau,

    #[error("logarithm argument must be a positive rational")]
    NonPositiveLogArgument,

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
