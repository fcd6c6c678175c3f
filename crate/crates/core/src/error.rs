use thiserror::Error;

/// Failure modes shared across the operator modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("not anti-Hermitian: max |(X + X\u{2020})_jk| = {defect:.3e} exceeds {bound:.3e}")]
    NotAntiHermitian { defect: f64, bound: f64 },

    #[error("matrix is not strictly upper or strictly lower triangular")]
    NotTriangular,

    #[error("band {band} exceeds matrix dimension {dim}")]
    BandExceedsDim { band: usize, dim: usize },

    #[error("invalid truncation config: {0}")]
    InvalidConfig(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension {dim} too small: {context}")]
    DimTooSmall { dim: usize, context: &'static str },

    #[error("series diverges: t = {t} is a multiple of 2\u{3c0}")]
    DivergentSum { t: f64 },

    #[error("decomposition undefined near t = 0: |t| = {t_abs:.3e} below {min:.3e}")]
    DecompositionNearZero { t_abs: f64, min: f64 },

    #[error("measure degenerates: |f(t)|\u{b2} = {value:.3e} below floor {floor:.3e}")]
    DegenerateMeasure { value: f64, floor: f64 },

    #[error(
        "grid under-resolved for band {band}: needs radial \u{2265} {need_radial} \
         and angular \u{2265} {need_angular}, got {got_radial} and {got_angular}"
    )]
    UnderResolvedGrid {
        band: usize,
        need_radial: usize,
        need_angular: usize,
        got_radial: usize,
        got_angular: usize,
    },

    #[error("operator has support outside band {band}: entry ({row},{col}) has modulus {value:.3e}")]
    SupportOutsideBand {
        band: usize,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("invalid quadrature request: {0}")]
    InvalidQuadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
