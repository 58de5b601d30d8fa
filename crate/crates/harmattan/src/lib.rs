//! harmattan: a time-series forecasting toolkit.
//!
//! The crate covers the classical monthly-data workflow end to end:
//!
//! * [`series`]: the [`series::TimeSeries`] value type and its
//!   reversible transforms (differencing, min-max scaling, look-back
//!   windows, chronological splits).
//! * [`diagnostics`]: ADF and KPSS unit-root tests, ACF/PACF
//!   correlograms, and the Ljung-Box residual check.
//! * [`arima`]: ARIMA(p,d,q) by exact maximum likelihood (state-space
//!   Kalman filter), stepwise AIC order search, and forecasting with
//!   prediction intervals.
//! * [`neural`]: from-scratch simple RNN and LSTM one-step forecasters
//!   trained by backpropagation through time.
//! * [`evaluation`]: RMSE/MAE/MAPE scoring and a deterministic
//!   cross-model comparison harness.
//!
//! Everything is deterministic: estimation is seed-free, simulation and
//! neural training take explicit seeds. See the guide under `book/` for
//! worked narratives of each piece.
//!
//! ```
//! use harmattan::arima::{fit, ArimaOrder, simulate_arma};
//! use harmattan::series::TimeSeries;
//!
//! let data = simulate_arma(&[0.6], &[0.3], 0.0, 1.0, 500, 42, 100);
//! let series = TimeSeries::monthly(data, 2010, 1)?;
//! let model = fit(&series, ArimaOrder::new(1, 0, 1), true)?;
//! assert!((model.ar_coeffs[0] - 0.6).abs() < 0.2);
//! let forecast = model.forecast(12, 0.95)?;
//! assert_eq!(forecast.point.len(), 12);
//! # Ok::<(), harmattan::Error>(())
//! ```

pub mod arima;
pub mod diagnostics;
pub mod error;
pub mod evaluation;
mod linalg;
pub mod neural;
pub mod series;

pub use error::{Error, Result};
