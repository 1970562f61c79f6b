//! Inequality measures over non-negative size distributions.
//!
//! - [`micro`]: Lorenz curve, Gini, quantile shares, share ratios, Palma.
//! - [`welfare`]: Atkinson index and the generalized-entropy family.
//! - [`composite`](mod@composite): the Gini / inter-decile composite index, its weight
//!   calibration, the multi-percentile form and the alternative index.
//! - [`panel`]: country-year panels read from CSV.
//! - [`ranking`]: rankings, rank comparisons and per-country series.
//! - [`cli`]: the `ineq` command.

pub mod cli;
pub mod composite;
pub mod error;
pub mod micro;
pub mod panel;
pub mod ranking;
pub mod welfare;

pub use composite::{
    alternative_index, calibrate_alpha, composite, generalized_composite, h_transform, mean_alpha,
    CompositeResult, ShareRatio, Weight,
};
pub use error::{Error, Result};
pub use micro::{gini, lorenz_curve, IncomeSample, LorenzCurve};
pub use panel::{parse_panel, ratio_of, CountryYearRecord, Panel, SchemaConfig, Source};
pub use ranking::{compare_rankings, rank, series, Indicator, RankTable};
