use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is prime but not congruent to 5 mod 8")]
    WrongResidueClass(u64),

    #[error("{theta} is not a primitive root modulo {p}")]
    NotPrimitiveRoot { p: u64, theta: u64 },

    #[error("no representation {0} = x^2 + 4y^2 with x = 1 mod 4 was found")]
    NoDecomposition(u64),

    #[error("neither or both signs of y reproduce the enumerated matrix for p = {0}")]
    AmbiguousSign(u64),

    #[error("closed-form entry {entry} is {numerator}/16, which is not a non-negative integer")]
    NonIntegralEntry { entry: char, numerator: i64 },

    #[error("index {index} out of range 1..={limit}")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("floor_log4(0) is undefined")]
    DomainError,

    #[error("4-adic denominators must be odd and nonzero")]
    EvenDenominator,
}

impl Error {
    /// True for errors caused by bad user input rather than an internal
    /// consistency failure. The CLI maps these to exit code 1, the rest to 2.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::WrongResidueClass(_)
                | Error::NotPrimitiveRoot { .. }
                | Error::IndexOutOfRange { .. }
                | Error::EvenDenominator
                | Error::DomainError
        )
    }

    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::WrongResidueClass(_) => "WrongResidueClass",
            Error::NotPrimitiveRoot { .. } => "NotPrimitiveRoot",
            Error::NoDecomposition(_) => "NoDecomposition",
            Error::AmbiguousSign(_) => "AmbiguousSign",
            Error::NonIntegralEntry { .. } => "NonIntegralEntry",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DomainError => "DomainError",
            Error::EvenDenominator => "EvenDenominator",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
