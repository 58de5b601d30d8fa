//! Doc-test shim for the guide under `book/`.
//!
//! mdbook cannot run example code against this workspace's crates, so
//! every chapter is included here as module documentation and
//! `cargo test --doc -p harmattan-guide` executes the book's Rust
//! snippets verbatim. One module per chapter keeps failures traceable
//! to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/time-series.md")]
pub mod time_series {}

#[doc = include_str!("../../../book/src/stationarity.md")]
pub mod stationarity {}

#[doc = include_str!("../../../book/src/correlograms.md")]
pub mod correlograms {}

#[doc = include_str!("../../../book/src/arima.md")]
pub mod arima {}

#[doc = include_str!("../../../book/src/model-selection.md")]
pub mod model_selection {}

#[doc = include_str!("../../../book/src/forecasting.md")]
pub mod forecasting {}

#[doc = include_str!("../../../book/src/neural-networks.md")]
pub mod neural_networks {}

#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
