use thiserror::Error;

/// Every failure the engine can report. Variant names follow the error
/// vocabulary of the individual operations so callers can match on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // rings
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("undecidable in this ring: {0}")]
    Undecidable(String),
    #[error("unknown variable `{0}`")]
    VariableUnknown(String),
    #[error("stable range check needs a finite ring")]
    InfiniteRing,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("cannot map element: {0}")]
    NotRepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),

    // matform
    #[error("form kinds need an even size, got {0}")]
    OddSize(usize),
    #[error("the linear kind carries no bilinear form")]
    LinearHasNoForm,
    #[error("bad generator indices: {0}")]
    BadIndices(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("nontrivial involution is not supported here: {0}")]
    UnsupportedInvolution(String),
    #[error("2 must be invertible for symplectic/orthogonal kinds")]
    TwoNotInvertible,

    // transvect
    #[error("orthogonality violated: {0}")]
    OrthogonalityViolated(String),
    #[error("vector is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("bad certificate: {0}")]
    BadCertificate(String),
    #[error("vector is not in the module: {0}")]
    NotInModule(String),

    // commcalc
    #[error("index clash: {0}")]
    IndexClash(String),
    #[error("index 1 is not allowed here: {0}")]
    IndexOne(String),
    #[error("no verified decomposition found: {0}")]
    NoDecomposition(String),

    // lgp
    #[error("word is not the identity at X = 0")]
    NotBasedAtIdentity,
    #[error("localizing element is nilpotent")]
    NilpotentS,
    #[error("local data does not match: {0}")]
    BadLocalData(String),
    #[error("ring is not recognized as local: {0}")]
    NotLocalRing(String),
    #[error("matrix is not congruent to the identity modulo the ideal")]
    NotCongruentToIdentity,
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
    #[error("congruence level must be at least 2, got {0}")]
    InsufficientCongruence(u32),
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("entry ({0},{1}) is not nilpotent")]
    EntryNotNilpotent(usize, usize),
    #[error("matrix minus identity has a non-nilpotent entry")]
    NotUnipotentModNil,
    #[error("the path I + X(tau - I) leaves the group")]
    FormNotPreserved,
    #[error("word does not reduce to the given matrix: {0}")]
    BadWord(String),
    #[error("diagonal matrix is not elementary: {0}")]
    NotElementary(String),

    // cli
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
