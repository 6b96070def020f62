//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice mismatch: step {left} vs {right}; the operands belong to different oscillator conventions")]
    LatticeMismatch { left: String, right: String },

    #[error("composition requires an inner series with zero constant term (or a polynomial outer series)")]
    NonzeroInnerConstant,

    #[error("series reversion requires a nonvanishing linear coefficient")]
    VanishingLinearCoefficient,

    #[error("negative coupling on a fractional exponent lattice: pass `principal_branch = true` to select the principal branch")]
    BranchRequired,

    #[error("coupling g = {g} is outside the {regime} regime for degree m = {m}")]
    WrongRegime { m: u32, g: f64, regime: &'static str },

    #[error("no A-function fixture for degree {m}; supported degrees: {supported:?}")]
    NoFixture { m: u32, supported: Vec<u32> },

    #[error("requested order {requested} exceeds the fixture depth for degree {m}; maximum derivable order is {max}")]
    OrderExceedsFixture { m: u32, requested: usize, max: usize },

    #[error("trans-series logarithm index L = {l} violates the bound L <= max(0, J-1) = {lmax} at J = {j}")]
    LogIndexBound { j: u32, l: u32, lmax: u32 },

    #[error("nu-polynomial interpolation failed verification at level n = {level} for K = {order}: degree bound too small")]
    InterpolationMismatch { order: usize, level: u32 },

    #[error("quadrature did not reach tolerance {tolerance}; achieved estimate {achieved}")]
    QuadratureTolerance { tolerance: f64, achieved: f64 },

    #[error("rotation angle theta = {theta} outside the allowed window |theta| < {limit} for degree {m}")]
    ThetaOutOfRange { m: u32, theta: f64, limit: f64 },

    #[error("basis dimension {dim} too small; need at least {min}")]
    DimTooSmall { dim: usize, min: usize },

    #[error("no stability plateau found; best variation {variation:.3e} above threshold {threshold:.3e}\n{table}")]
    NoPlateau {
        variation: f64,
        threshold: f64,
        table: String,
    },

    #[error("Borel-Pade summation needs at least {min} coefficients, got {got}")]
    TooFewCoefficients { min: usize, got: usize },

    #[error("width series has {have} correction coefficients, {need} requested")]
    WidthDepth { have: usize, need: usize },

    #[error("inverse iteration did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("singular banded matrix during LU factorization")]
    SingularMatrix,

    #[error("cache checksum mismatch for {path}")]
    CacheChecksum { path: String },

    #[error("malformed rational literal {0:?}; expected \"num/den\"")]
    BadRational(String),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
