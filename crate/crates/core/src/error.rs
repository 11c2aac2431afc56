use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point sits on (or numerically at) a pole.
    #[error("pole at x = {x}")]
    Pole { x: f64 },

    /// The pole residue must satisfy alpha > 1/2.
    #[error("alpha = {0} violates alpha > 1/2 (finite kinetic energy and square integrability)")]
    AlphaTooSmall(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("configuration is outside the ordered sector: {0}")]
    OutsideSector(String),

    #[error("configuration within {distance:e} of the sector boundary (need > {required:e})")]
    NearBoundary { distance: f64, required: f64 },

    #[error("no closed-form ground energy for a custom phi; use residual_energy")]
    UnsupportedFamily,

    #[error("operation requires {expected} geometry")]
    Geometry { expected: &'static str },

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("normalizability gate failed: {0}")]
    NotNormalizable(String),

    #[error("chain accepted no proposals; step_scale = {0} is pathological")]
    ZeroAcceptance(f64),

    #[error("invalid chain parameters: {0}")]
    InvalidChain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
