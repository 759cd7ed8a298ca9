use thiserror::Error;

/// Errors produced by the design and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its precondition (bad flag, out-of-range value).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The inputs are formally valid but hit a singularity of the model.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-physical geometry: {0}")]
    NonPhysicalGeometry(String),

    /// An inset feed can only lower the input resistance.
    #[error("cannot match {target_ohm} ohm: edge resistance is {edge_ohm} ohm")]
    Unmatchable { target_ohm: f64, edge_ohm: f64 },

    #[error("invalid frequency range: {0}")]
    InvalidRange(String),

    #[error("radiation pattern is identically zero")]
    ZeroPattern,

    #[error("efficiency must lie in (0, 1], got {0}")]
    InvalidEfficiency(f64),

    /// The pattern never drops to half power inside the visible hemisphere.
    #[error("no half-power crossing inside the hemisphere")]
    NoCrossing,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerical model, as opposed to bad arguments.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            Error::DegenerateInput(_)
                | Error::NonPhysicalGeometry(_)
                | Error::Unmatchable { .. }
                | Error::ZeroPattern
                | Error::NoCrossing
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
