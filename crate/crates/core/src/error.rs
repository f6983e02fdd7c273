use thiserror::Error;

/// Errors raised by the time-scale model and its pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid time scale: {0}")]
    InvalidScale(String),

    #[error("time {t} is not a grid point of the scale with step {h}")]
    NotAGridPoint { t: f64, h: f64 },

    #[error("offset {offset} is not an integer multiple of the step {h}")]
    NotAGridOffset { offset: f64, h: f64 },

    #[error("grid function has {got} values, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid function value at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("coefficient {p} is not regressive for step {h} (1 + p h = 0)")]
    NotRegressive { p: f64, h: f64 },

    #[error("second-order equation is not regressive: 1 - a h + b h^2 = 0 (a = {alpha}, b = {beta}, h = {h})")]
    NotRegressiveEquation { alpha: f64, beta: f64, h: f64 },

    #[error("negative discriminant {discriminant}: oscillatory fundamental systems are not supported")]
    OscillatoryUnsupported { discriminant: f64 },

    #[error("invalid model parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("leading coefficient 1 + a b^2 - a b^2 j h vanishes at h = {h}")]
    DegenerateLeadingCoefficient { h: f64 },

    #[error("horizon {horizon} is not an integer multiple of step {h}")]
    NonCommensurateHorizon { horizon: f64, h: f64 },

    #[error("boundary system is singular: {0}")]
    SingularBoundarySystem(String),

    #[error("path scale (h = {path_h}, T = {path_horizon}) does not match the model (h = {h}, T = {horizon})")]
    ScaleMismatch {
        h: f64,
        horizon: f64,
        path_h: f64,
        path_horizon: f64,
    },

    #[error("stationarity system is singular: pivot {index} = {pivot}")]
    SingularSystem { index: usize, pivot: f64 },

    #[error("path kind does not support this operation: {0}")]
    WrongPathKind(&'static str),

    #[error("parse error at row {row}{}: {message}", column.as_ref().map(|c| format!(", column `{c}`")).unwrap_or_default())]
    Parse {
        row: usize,
        column: Option<String>,
        message: String,
    },

    #[error("missing month {missing} in the series")]
    Gap { missing: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Short name of the error variant, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidScale(_) => "InvalidScale",
            Error::NotAGridPoint { .. } => "NotAGridPoint",
            Error::NotAGridOffset { .. } => "NotAGridOffset",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::NotRegressive { .. } => "NotRegressive",
            Error::NotRegressiveEquation { .. } => "NotRegressiveEquation",
            Error::OscillatoryUnsupported { .. } => "OscillatoryUnsupported",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::DegenerateLeadingCoefficient { .. } => "DegenerateLeadingCoefficient",
            Error::NonCommensurateHorizon { .. } => "NonCommensurateHorizon",
            Error::SingularBoundarySystem(_) => "SingularBoundarySystem",
            Error::ScaleMismatch { .. } => "ScaleMismatch",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::WrongPathKind(_) => "WrongPathKind",
            Error::Parse { .. } => "ParseError",
            Error::Gap { .. } => "GapError",
            Error::Range(_) => "RangeError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
