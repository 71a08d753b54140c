use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("operands were built on different bases")]
    BasisMismatch,
    #[error("Fourier symbol is not self-adjoint: c(-{n}) != conj(c({n}))")]
    NonHermitianSymbol { n: i64 },
    #[error("time operators have no n = 0 term, but c(0) = {0}")]
    ZeroModeCoefficient(Complex64),
    #[error("operator is not hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("outside the supported domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
