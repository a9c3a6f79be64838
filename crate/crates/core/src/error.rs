use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("grid needs at least 2 cells, got {n_cells}")]
    GridTooSmall { n_cells: usize },

    #[error("length mismatch: expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("negative entry at index {index}: {value}")]
    Negative { index: usize, value: f64 },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("total mass {mass} is not 1 within tolerance")]
    NotNormalized { mass: f64 },

    #[error("degenerate weights: every entry is zero, nothing to normalize")]
    DegenerateWeights,

    #[error("invalid interval [{a}, {b}]: need 0 <= a <= b <= 1")]
    InvalidInterval { a: f64, b: f64 },

    #[error("densities live on different grids ({left} vs {right} cells)")]
    GridMismatch { left: usize, right: usize },

    #[error("action x = {x} lies outside (0, 1), where the congestion term is singular")]
    SingularAction { x: f64 },

    #[error("parameter {name} = {value} is out of range: requires {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error(
        "q-exponential undefined at z = {z}, q = {q}: base 1 + (1-q)z = {base} is not positive"
    )]
    QExponentialDomain { z: f64, q: f64, base: f64 },

    #[error("payoff value {value} at cell {index} is positive; the q > 1 response map requires nonpositive payoffs")]
    PositivePayoff { index: usize, value: f64 },
}
