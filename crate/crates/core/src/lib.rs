//! Fuzzy-granulation forecasting: granulate a monthly series into Min/Mean/Max
//! window sequences, forecast each with a GA-tuned epsilon-SVR, and correct the
//! SVR residuals with an ARIMA model.

pub mod arima;
pub mod error;
pub mod ga;
pub mod granulation;
pub mod grnn;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod svr;
pub mod synthetic;
pub mod timeseries;

pub use arima::{ArimaModel, ArimaOrder, ForecastMode};
pub use error::{Error, Result};
pub use ga::{GaConfig, GaResult, GenomeEncoding, ParamRange, RangeScale};
pub use granulation::{FuzzyGranule, GranuleParam, GranuleSequences};
pub use grnn::{GrnnModel, SigmaSearchResult};
pub use metrics::{evaluate, MetricsBundle};
pub use pipeline::{
    compare_models, fit_hybrid, forecast_hybrid, ComparisonReport, ExperimentConfig,
    ForecastReport, HybridModel, MonthlyMapping,
};
pub use svr::{FeatureMode, SupervisedSet, SvrModel, SvrParams};
pub use timeseries::{ScalingState, SplitSpec, TimeSeries, YearMonth};
