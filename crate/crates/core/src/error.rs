use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {q} exceeds the configured bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("no primitive defining polynomial found for p = {p}, degree {degree}")]
    NoGenerator { p: u32, degree: u32 },
    #[error("zero has no discrete logarithm")]
    ZeroElement,
    #[error("characteristic 2 is not supported here: {0}")]
    EvenCharacteristic(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("group {group} not supported by module {module}")]
    UnsupportedGroup { group: String, module: String },
    #[error("subspace is not invariant: {0}")]
    NotInvariant(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
    #[error("characteristic polynomial does not split over the quadratic field: {0}")]
    DoesNotSplit(String),
    #[error("enumeration bound exceeded: {needed} points > {bound}")]
    EnumerationBound { needed: u128, bound: u128 },
    #[error("non-integral decomposition: {0}")]
    NonIntegral(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
