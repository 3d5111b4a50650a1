//! Spectral risk analysis of daily asset prices.
//!
//! The pipeline turns a list of dated closing prices into a continuous,
//! trend-removed piecewise-exponential function, evaluates its exact Fourier
//! transform on a dense frequency grid, and derives cumulative-spectrum risk
//! indicators (irrationality ratios, band shares) alongside classical
//! volatility.
//!
//! Modules follow the pipeline order:
//!
//! - [`ingest`]: parse and index raw `date,close` data
//! - [`detrend`]: build the piecewise-exponential fluctuation curve
//! - [`spectrum`]: exact closed-form transform, scalar and dense-grid
//! - [`measures`]: cumulative spectrum, irrationality ratios, volatility
//! - [`oracle`]: adaptive-quadrature reference for the analytic transform
//! - [`synth`]: deterministic synthetic series for tests and benchmarks
//! - [`cli`]: command-line front end

pub mod cli;
pub mod detrend;
pub mod error;
pub mod ingest;
pub mod measures;
pub mod oracle;
pub mod spectrum;
pub mod synth;

pub use error::{Error, Result};
