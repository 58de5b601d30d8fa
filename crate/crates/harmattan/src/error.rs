//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A series was empty where at least one observation is required.
    #[error("series is empty")]
    EmptySeries,

    /// A non-finite value (NaN or infinity) was rejected at construction.
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    /// Input too short for the requested operation.
    #[error("{operation} needs at least {required} observations, got {actual}")]
    TooShort {
        operation: &'static str,
        required: usize,
        actual: usize,
    },

    /// A parameter fell outside its admissible range.
    #[error("{name} out of range: {value} (expected {expected})")]
    OutOfRange {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    /// Constant series: min-max scaling would divide by zero.
    #[error("zero range: series is constant at {value}, cannot fit scaler")]
    ZeroRange { value: f64 },

    /// Zero-variance series where correlations are undefined.
    #[error("zero variance: correlations are undefined for a constant series")]
    ZeroVariance,

    /// A differencing state does not match its claimed order.
    #[error("corrupt difference state: order {order} requires {order} seeds, found {seeds}")]
    SeedMismatch { order: usize, seeds: usize },

    /// Regression design matrix was singular or numerically rank-deficient.
    #[error("rank-deficient regression: {context}")]
    RankDeficient { context: &'static str },

    /// Degrees of freedom would be non-positive.
    #[error("invalid degrees of freedom: lags ({lags}) must exceed fitted parameter count ({fitted_params})")]
    InvalidDof { lags: usize, fitted_params: usize },

    /// The likelihood optimizer ran out of iterations.
    #[error("optimizer did not converge within {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        /// Best fit found so far, for inspection.
        best: Box<crate::arima::ArimaFit>,
    },

    /// The likelihood was not evaluable at the requested parameters.
    #[error("likelihood evaluation failed: {context}")]
    Likelihood { context: &'static str },

    /// Every candidate in a model search failed.
    #[error("model search failed: no candidate produced a finite AIC")]
    SearchFailed {
        trace: Box<crate::arima::SearchTrace>,
    },

    /// Array shapes disagree with the model configuration.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    /// Training produced a non-finite loss.
    #[error("training diverged: non-finite loss at epoch {epoch}")]
    Diverged { epoch: usize },

    /// Paired inputs of different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// MAPE is undefined because every actual value is zero; RMSE and MAE
    /// are still carried in the payload.
    #[error("MAPE undefined: all actual values are zero (rmse = {rmse}, mae = {mae})")]
    MapeUndefined { rmse: f64, mae: f64 },

    /// Every model in a comparison failed.
    #[error("comparison failed: all {attempted} model specs failed")]
    AllModelsFailed { attempted: usize },
}

impl Error {
    /// True for errors caused by bad input data rather than numerical trouble.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySeries
                | Error::NonFinite { .. }
                | Error::TooShort { .. }
                | Error::OutOfRange { .. }
                | Error::ZeroRange { .. }
                | Error::ZeroVariance
                | Error::SeedMismatch { .. }
                | Error::InvalidDof { .. }
                | Error::LengthMismatch { .. }
                | Error::ShapeMismatch { .. }
        )
    }
}
