use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("element is not in the ideal")]
    NotInIdeal,
    #[error("ideal is not zero-dimensional: {0}")]
    NotZeroDimensional(String),
    #[error("not a factorisation: {block}[{row}][{col}] of d^2 - W*I is {entry}")]
    NotAFactorisation {
        block: String,
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("homotopy identity failed: {0}")]
    HomotopyIdentityFailed(String),
    #[error("expansion bound {0} exceeded")]
    BoundExceeded(usize),
    #[error("unsupported connection: {0}")]
    UnsupportedConnection(String),
    #[error("perturbation is not small within {0} iterations")]
    PerturbationNotSmall(usize),
    #[error("side conditions violated: {0}")]
    SideConditionsViolated(String),
    #[error("potential involves integrated variables: {0}")]
    PotentialNotBased(String),
    #[error("characteristic {p} is too small (need p > {need})")]
    CharacteristicTooSmall { p: u64, need: u64 },
    #[error("base ring is not a field: {0}")]
    BaseNotField(String),
    #[error("variable clash: {0}")]
    VariableClash(String),
    #[error("idempotent is not constant: {0}")]
    NotConstant(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
