use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank/step: d={d}, s={s} (both must be at least 1)")]
    InvalidRankStep { d: usize, s: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("BCH truncation at step {step} is not supported (maximum {max})")]
    BchStepUnsupported { step: usize, max: usize },

    #[error("Lie algebra is not nilpotent (lower central series stabilises at dimension {stable_dim})")]
    NotNilpotent { stable_dim: usize },

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("xi is undefined for the zero vector")]
    ZeroVector,

    #[error("element is not central")]
    NotCentral,

    #[error("marks do not generate the Lie algebra (span has dimension {span} < {dim})")]
    MarksNotGenerating { span: usize, dim: usize },

    #[error("vectors do not span R^{dim}")]
    NotSpanning { dim: usize },

    #[error("enumeration budget of {budget} elements exceeded")]
    BudgetExceeded { budget: usize },

    #[error("dilation leaves the integer lattice")]
    NonIntegralDilation,

    #[error("element {0} does not belong to this group context")]
    ForeignElement(String),

    #[error("generating set is not symmetric: inverse of {0} is missing")]
    NotSymmetric(String),

    #[error("lattice condition fails: [e_{i}, e_{j}] has non-integer coordinates")]
    LatticeCondition { i: usize, j: usize },

    #[error("word evaluation is not a homomorphism on the progression")]
    NotHomomorphism,

    #[error("wrong subset size: expected {expected}, got {got}")]
    SubsetSize { expected: usize, got: usize },

    #[error("zero polynomial has no envelope")]
    ZeroPolynomial,

    #[error("degenerate fit window ({lo}, {hi})")]
    DegenerateWindow { lo: usize, hi: usize },

    #[error("growth series too short: need radius {needed}, have {have}")]
    SeriesTooShort { needed: usize, have: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("postcondition violated: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
