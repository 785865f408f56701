use thiserror::Error;

/// Errors raised by the algebra, series and index routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("polynomial has circle-variable terms but the point has no circle coordinate")]
    MissingCircleCoordinate,

    #[error("coordinate {index} has modulus {modulus}, expected 1")]
    NotUnitModulus { index: usize, modulus: f64 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("expected a unit monomial without circle variable, got `{0}`")]
    NotUnitMonomial(String),

    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: i64, hi: i64 },

    #[error("windows [{a_lo}, {a_hi}] and [{b_lo}, {b_hi}] do not overlap")]
    DisjointWindows { a_lo: i64, a_hi: i64, b_lo: i64, b_hi: i64 },

    #[error("index {m} outside window [{lo}, {hi}]")]
    OutsideWindow { m: i64, lo: i64, hi: i64 },

    #[error("j = {j} outside the admissible range 0..={max} for k = {k}")]
    JOutOfRange { j: i64, k: i64, max: i64 },

    #[error("A polynomials exist only for k < 0 (got k = {0})")]
    NonNegativeK(i64),

    #[error("cohomological degree q = {q} outside 0..={n}")]
    DegreeOutOfRange { q: usize, n: usize },

    #[error("n must be at least {min} (got {n})")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("division is not exact")]
    InexactDivision,

    #[error("coordinates {i} and {j} are too close: |t_i - t_j| = {dist:e}")]
    CoincidentCoordinates { i: usize, j: usize, dist: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
