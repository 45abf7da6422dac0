use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("eigenvalues are not pairwise distinct ({0})")]
    EigenvaluesNotDistinct(String),
    #[error("matrix is not diagonalizable: eigenspace for {eigenvalue} has dimension {kernel_dim}")]
    NotDiagonalizable { eigenvalue: String, kernel_dim: usize },
    #[error("linear system is inconsistent (residual {residual:e})")]
    InconsistentSystem { residual: f64 },
    #[error("{0} eigenvalues are not rational")]
    IrrationalEigenvalues(usize),
    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("not a representation: {0}")]
    NotHomomorphism(String),
    #[error("character S_-1 requires even n, got n = {0}")]
    ParityMismatch(usize),
    #[error("representations act on different groups")]
    GroupMismatch,
    #[error("operation requires {expected} scalars, got {got}")]
    ScalarKindMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("tensor degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("invalid representation descriptor `{0}`")]
    InvalidDescriptor(String),
    #[error("power-sum label {label:?} is out of range for d = {d}")]
    LabelOutOfRange { label: Vec<usize>, d: usize },
    #[error("orbit is linearly dependent: degree-2 tensor has rank {rank}, group order is {order}")]
    LinearlyDependentOrbit { rank: usize, order: usize },
    #[error("contractions stayed degenerate after {retries} redraws")]
    DegenerateContraction { retries: usize },
    #[error("scale ratios disagree: {0}")]
    InconsistentScale(String),
    #[error("recovered orbit failed verification: {0}")]
    VerificationFailed(String),
    #[error("sampled pair is degenerate after {0} attempts")]
    DegenerateSample(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
