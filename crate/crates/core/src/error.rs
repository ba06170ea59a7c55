use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("abscissa {t} lies outside the spline domain [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },

    #[error("segment index {index} out of range for {segments} segments")]
    Index { index: usize, segments: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("problem size {n} outside the supported range {min}..={max}")]
    Size { n: usize, min: usize, max: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("target function returned a non-finite value at x = {x}")]
    Evaluation { x: f64 },

    #[error("window {window} holds {points} data points, fewer than its {knots} knots")]
    WindowData { window: usize, points: usize, knots: usize },

    #[error("{points} data points cannot determine {knots} knot values")]
    InsufficientData { points: usize, knots: usize },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
