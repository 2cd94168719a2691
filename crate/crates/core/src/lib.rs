//! Natural visibility graphs of time series and the power of
//! scale-freeness (PSVG) of their degree distributions.
//!
//! The pipeline is: load a series ([`series_io`]), shift it to the positive
//! plane, build its visibility graph ([`visibility`]), take the degree
//! distribution and fit `log2 P(k)` against `log2(1/k)` ([`scaling`]).
//! [`synth`] provides fractional Brownian motion and other series with
//! known structure for validating the estimate.

pub mod cli;
pub mod report;
pub mod scaling;
pub mod series_io;
pub mod synth;
pub mod visibility;

pub use scaling::{
    analyze_series, AnalysisConfig, DegreeDistribution, FitRange, PsvgFit, WindowReport,
};
pub use series_io::{TimeSeries, WindowSpec};
pub use visibility::{build_graph_fast, build_graph_naive, Constructor, VisibilityGraph};
