use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone is not proper (its dual open cone is empty)")]
    ImproperCone,
    #[error("no supplied direction lies in HPC")]
    EmptyHpc,
    #[error("test density decay does not dominate growth: {0}")]
    GrowthMismatch(String),
    #[error("cutoff does not cover the support: {0}")]
    SupportLeak(String),
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("unbounded segment without a damping certificate")]
    MissingDampingCertificate,
    #[error("chain comes within {distance:.3e} of a declared zero (margin {margin})")]
    MarginViolation { distance: f64, margin: f64 },
    #[error("point outside the convergence region: {0}")]
    OutOfRegion(String),
    #[error("growth certificate failed: {0}")]
    GrowthCertificateFail(String),
    #[error("no admissible anchor found: {0}")]
    ConvergenceFail(String),
    #[error("operator is zero")]
    ZeroOperator,
    #[error("Koszul degree overflow: degree {degree} with {len} generators")]
    DegreeOverflow { degree: usize, len: usize },
    #[error("sum of a_j P_j does not equal h")]
    CoefficientMismatch,
    #[error("degree cap {cap} below the sum of generator degrees {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("operator is not solvable on HPC: {0}")]
    SolvabilityFail(String),
    #[error("pole on chain: {0}")]
    PoleOnChain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
