use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis matrix is singular (|det| = {det:e})")]
    SingularBasis { det: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is outside the supported range 1..=8")]
    UnsupportedDimension(usize),
    #[error("lattice scale m must be a positive integer")]
    InvalidScale,
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("enumeration would visit {candidates:e} candidates (cap {cap})")]
    RadiusTooLarge { candidates: f64, cap: u64 },
    #[error("invalid cosine series: {0}")]
    InvalidSeries(&'static str),
    #[error("certification grid needs {samples:e} samples (cap {cap})")]
    GridTooFine { samples: f64, cap: u64 },
    #[error("vector is not in the lattice (coefficient residual {residual:e})")]
    VNotInLattice { residual: f64 },
    #[error("m = {0} is too small; the construction needs m >= 3")]
    MTooSmall(u32),
    #[error("point has quotient norm {norm} < 1")]
    NotInRegion { norm: f64 },
    #[error("quadrature did not converge after {refinements} refinements")]
    QuadratureNotConverged { refinements: u32 },
    #[error("decay exponent must be positive to bound the lattice-sum tail")]
    TailNotBounded,
    #[error("Fourier transform is negative ({value:e}) at index {index}")]
    NegativeSpectrum { index: u64, value: f64 },
    #[error("profile has no Fourier evaluator")]
    MissingFourier,
    #[error("no nonzero frequency within the requested radius")]
    EmptyFrequencySet,
    #[error("empty input list")]
    EmptyList,
    #[error("sequence entries must have strictly increasing m")]
    NotIncreasing,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
