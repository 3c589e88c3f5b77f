use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} outside the supported range {min}..={max}")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },
    #[error("vector norm is {norm}, expected 1 within 1e-9")]
    NotNormalized { norm: f64 },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not idempotent (deviation {deviation:e})")]
    NotIdempotent { deviation: f64 },
    #[error("basis is not orthonormal: <b{i}|b{j}> deviates by {deviation:e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },
    #[error("basis needs {expected} vectors, found {found}")]
    WrongVectorCount { expected: usize, found: usize },
    #[error("basis element names must be distinct, `{0}` repeats")]
    DuplicateName(String),
    #[error("evolution time must be finite, got {0}")]
    NonFiniteTime(f64),
    #[error("hbar must be finite and positive, got {0}")]
    InvalidHbar(f64),
    #[error("bra-ket and trace forms of the Born rule disagree: {braket} vs {trace}")]
    BornRuleMismatch { braket: f64, trace: f64 },
    #[error("invalid Borel set `{text}`: {message}")]
    InvalidBorelSet { text: String, message: String },
}
