use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported extension degree {0}, expected 1..=16")]
    UnsupportedDegree(u32),
    #[error("bitmask 0x{bits:x} is not an element of GF(2^{n})")]
    ElementOutOfRange { bits: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,
    #[error("{0} is not a supported power of two")]
    NotPowerOfTwo(u64),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("constant polynomial has no splitting field degree")]
    ConstantPolynomial,
    #[error("Dickson index {0} exceeds the cache bound")]
    IndexTooLarge(u64),
    #[error("division did not leave a zero remainder: {0}")]
    InexactDivision(String),
    #[error("GF(2^{small}) does not embed in GF(2^{large})")]
    NoEmbedding { small: u32, large: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}
