use alloc::string::String;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by an element indistinguishable from zero at precision {0}")]
    DivisionByZeroAtPrecision(i64),
    #[error("incompatible structures: {0}")]
    IncompatibleStructures(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("outside the convergence domain: {0}")]
    ConvergenceDomainViolated(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("requested degree {requested} exceeds stored degree {stored}")]
    TruncationOverflow { requested: usize, stored: usize },
    #[error("no value supplied for character {0}")]
    MissingCharacterValue(String),
    #[error("class number {0} > 1 is not supported")]
    UnsupportedClassNumber(i64),
    #[error("ideal is not coprime to the conductor")]
    NotCoprimeToConductor,
    #[error("no valid decomposition (c, n) found")]
    DegenerateDecomposition,
    #[error("the summand is not invariant under the unit group")]
    NotGammaInvariant,
    #[error("convergence not guaranteed: {0}")]
    ConvergenceNotGuaranteed(String),
    #[error("coprimality violated: {0}")]
    CoprimalityViolation(String),
    #[error("unsupported field with discriminant {0}")]
    UnsupportedField(i64),
    #[error("recognition failed: {0}")]
    RecognitionFailed(String),
    #[error("level too small: {0}")]
    LevelTooSmall(String),
    #[error("non-ordinary prime: {0}")]
    NonOrdinaryUnsupported(String),
    #[error("the zero ideal is not allowed")]
    ZeroIdeal,
    #[error("unsupported conductor: {0}")]
    UnsupportedConductor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
