use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// The CLI maps these onto exit codes: parse/validation problems exit 1,
/// `NotArithmetic`/`LikelyInfinite` exit 2, `ConditionViolated` exit 3 and
/// everything that signals a broken internal invariant exits 4.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("root of unity must have positive order")]
    InvalidOrder,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionError { expected: usize, got: usize },

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("matrix is not arithmetic: no Cartan entry for ({i},{j}) within scan bound {bound}")]
    NotArithmetic { i: usize, j: usize, bound: u64 },

    #[error("enumeration exceeded cap ({what} > {cap}); root system is likely infinite")]
    LikelyInfinite { what: String, cap: usize },

    #[error("root-string method did not yield a Cartan matrix: {0}")]
    NotARootSystem(String),

    #[error("Cartan matrix block is not of finite type: {0}")]
    NotFiniteType(String),

    #[error("centrality condition violated: {0}")]
    ConditionViolated(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("matrix is singular where non-degeneracy is required")]
    NonDegeneracyViolated,

    #[error("exponent search exhausted budget after {tried} candidates")]
    SearchFailed { tried: usize },

    #[error("Cartan matrix recovery mismatch: {0}")]
    RecoveryMismatch(String),

    #[error("Chevalley embedding relation failed: {0}")]
    EmbeddingMismatch(String),

    #[error("Manin triple check failed: {0}")]
    ManinCheckFailed(String),

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl EngineError {
    /// Exit code for the CLI, per the documented table.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::ParseError { .. }
            | EngineError::Io(_)
            | EngineError::InvalidOrder
            | EngineError::DimensionError { .. }
            | EngineError::UnsupportedParameters(_) => 1,
            EngineError::NotArithmetic { .. } | EngineError::LikelyInfinite { .. } => 2,
            EngineError::ConditionViolated(_) => 3,
            EngineError::NotARootSystem(_)
            | EngineError::NotFiniteType(_)
            | EngineError::InternalInvariantViolation(_)
            | EngineError::NonDegeneracyViolated
            | EngineError::SearchFailed { .. }
            | EngineError::RecoveryMismatch(_)
            | EngineError::EmbeddingMismatch(_)
            | EngineError::ManinCheckFailed(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
