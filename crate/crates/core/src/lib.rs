//! Weak-form market-efficiency tests for daily price-index series.
//!
//! The crate ingests a dated series of closing values and runs three
//! classical procedures against the random-walk null: the Wald-Wolfowitz
//! runs test on the signs of day-to-day changes, the autocorrelation
//! function with per-lag significance, and an autoregressive fit by least
//! squares. Results assemble into reports that render as JSON, markdown
//! tables, and correlogram plots. A deterministic simulator provides
//! random-walk, AR, and i.i.d.-noise series for oracle and size checks.
//!
//! Lag sweeps and Monte Carlo seed sweeps run on rayon when the `parallel`
//! feature is enabled (the default); without it the sequential reference
//! paths are used. Both paths produce identical results.

pub mod acf;
pub mod ar;
pub mod dist;
pub mod error;
pub mod ingest;
pub mod report;
pub mod runs;
pub mod series;
pub mod simulate;
pub mod sweep;

pub use error::{EmhError, Result};
pub use series::{lag_align, ChangeSign, PricePoint, PriceSeries};
