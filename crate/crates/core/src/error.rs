use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive, got {0}")]
    InvalidDegree(u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("tower invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not a symplectic similitude")]
    NotSimilitude,
    #[error("cannot embed GSp({0}) into GSp({1})")]
    EmbeddingTooLarge(usize, usize),
    #[error("zero multiplier")]
    ZeroMultiplier,
    #[error("matrices carry different forms")]
    FormMismatch,
    #[error("invalid Gram matrix: {0}")]
    InvalidForm(&'static str),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// A relation of the normalizer presentation that failed to hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("relation failed: {0}")]
    RelationFailed(String),
    #[error("word group shapes differ")]
    ShapeMismatch,
    #[error("invalid group shape: {0}")]
    InvalidShape(String),
    #[error("matrix and word realizations disagree at {0}")]
    RealizationMismatch(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KgError {
    #[error("genus must be at least 1")]
    InvalidGenus,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("sampling bound must be at least 7, got {0}")]
    BoundTooSmall(u64),
    #[error("exact and sampled K_{g} disagree: exact {exact}, sampled {sampled}")]
    Inconsistent { g: u32, exact: String, sampled: String },
    #[error("residue-class search exceeded the word-size modulus for prime {0}")]
    ModulusOverflow(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness search needs g >= 2, got {0}")]
    GenusTooSmall(u32),
    #[error("zsigmondy scan needs g >= 7, got {0}")]
    ZsigmondyRange(u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("search cap {0} exceeded")]
    SearchCap(u64),
    #[error("counting fact failed: {0}")]
    CountingFact(String),
    #[error("no prime above 2g+1 divides p^d+1 for d <= g (g = {g}, p = {p})")]
    NoZsigmondyPrime { g: u32, p: u64 },
    #[error("special (3,3) construction failed: {0}")]
    Special33(String),
    #[error(transparent)]
    Kg(#[from] KgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("local analysis needs odd p, got {0}")]
    EvenPrime(u64),
    #[error("prime search cap {0} exceeded")]
    SearchCap(u64),
    #[error("{0} is ramified for this Frobenius computation")]
    Ramified(u64),
    #[error("lift at {place} failed: {detail}")]
    LiftFailed { place: String, detail: String },
    #[error("parity rule violated at {0}")]
    Parity(String),
    #[error("inconsistent congruence constraints: {0}")]
    Constraints(String),
    #[error("twist datum invalid: {0}")]
    Twist(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("8 does not divide {0}")]
    NotSpecial(u64),
    #[error("enumeration of {0} candidate cocycles exceeds the limit")]
    TooLarge(u128),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(u64, u64),
    #[error("special class check failed: {0}")]
    SpecialClass(String),
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("input rejected: {0}")]
    Input(String),
    #[error("search cap exceeded: {0}")]
    SearchCap(String),
    #[error("construction step {step} failed: {detail}")]
    Construction { step: String, detail: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("check `{check}` failed: {detail}")]
    CheckFailed { check: String, detail: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
