use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("Eisenstein exponent {0} is not an even integer >= 4")]
    InvalidEisensteinExponent(i64),

    #[error("tau must lie in the upper half plane, got Im(tau) = {0}")]
    NotInUpperHalfPlane(f64),

    #[error("argument choice: {0}")]
    ArgumentChoice(String),

    #[error("z = {0} lies on a nonzero lattice point; the regularized product vanishes there")]
    OnLattice(String),

    #[error("invalid ring specification: {0}")]
    InvalidRing(String),

    #[error("classes live in different rings")]
    RingMismatch,

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: String, found: String },

    #[error("invalid tangent data: {0}")]
    InvalidTangent(String),

    #[error("series must have constant term 1")]
    NonUnitSeries,

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("polynomial parse error: {0}")]
    Parse(String),

    #[error("unexpected nonzero integral at xi-bar power {power}")]
    UnexpectedXiPower { power: i32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
