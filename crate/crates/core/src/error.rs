use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("word uses letter {letter} outside an alphabet of size {size}")]
    AlphabetMismatch { letter: u16, size: usize },
    #[error("invalid generator name {0:?}: expected [A-Za-z0-9_]+")]
    InvalidName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("{0} is not a super-Lyndon-Shirshov word")]
    NotSuperLs(String),
    #[error("{sub} is not a subword of {word} at the given position")]
    BadSubword { word: String, sub: String },
    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(String),
    #[error("polynomial is not homogeneous in parity")]
    Inhomogeneous,
    #[error("not a Lie element: leading word {0} is not super-Lyndon-Shirshov")]
    NotLieElement(String),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("invalid ambiguity: {0}")]
    InvalidAmbiguity(String),
    #[error("overlap word {0} is not super-Lyndon-Shirshov")]
    OverlapNotSuperLs(String),
    #[error("relation set is only known complete up to degree {completed}, {requested} requested")]
    NotCompleted { completed: usize, requested: usize },
    #[error("completion exceeded the cap of {0} relations")]
    RelationCap(usize),
    #[error("characteristic {0} unsupported: characteristic 2,3 unsupported")]
    UnsupportedCharacteristic(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0}")]
    Validation(String),
    #[error("inhomogeneous derivation: {0}; run each parity component separately")]
    InhomogeneousDerivation(String),
    #[error("parity inconsistency: {0}")]
    ParityInconsistent(String),
    #[error("derivation extension inconsistent: {0}")]
    InconsistentDerivation(String),
    #[error("unexpected ambiguity at {0}")]
    UnexpectedAmbiguity(String),
    #[error("degree bound too small: {0}")]
    BoundTooSmall(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}
