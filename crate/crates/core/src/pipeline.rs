//! End-to-end hybrid: granulate, tune and train one SVR per granule sequence,
//! model the in-sample SVR residuals with ARIMA, and add the two forecasts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arima::{
    adf_test, estimate_arma, forecast, select_order, AdfSpec, ArimaModel, ArimaOrder, ForecastMode,
    Significance,
};
use crate::error::{Error, Result};
use crate::ga::{evolve, GaConfig, GaResult};
use crate::granulation::{granulate_values, GranuleParam, GranuleSequences};
use crate::grnn::{select_sigma, GrnnModel, SigmaSearchResult};
use crate::metrics::{evaluate, MetricsBundle};
use crate::rng::derive_seed;
use crate::svr::{
    default_max_iter, lag_features, make_supervised_multi, train_svr, FeatureMode, SupervisedSet,
    SvrModel,
};
use crate::timeseries::{split, ScalingState, SplitSpec, TimeSeries, YearMonth};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// How a window forecast `(a, m, b)` is spread over the months of the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonthlyMapping {
    /// Every month gets the Mean forecast.
    #[default]
    Mean,
    /// Piecewise linear from `a` through `m` to `b` across the window.
    Interpolate,
}

impl MonthlyMapping {
    pub fn expand(self, a: f64, m: f64, b: f64, window_len: usize) -> Vec<f64> {
        match self {
            MonthlyMapping::Mean => vec![m; window_len],
            MonthlyMapping::Interpolate if window_len == 1 => vec![m],
            MonthlyMapping::Interpolate => (0..window_len)
                .map(|j| {
                    let t = j as f64 / (window_len - 1) as f64;
                    if 2 * j == window_len - 1 {
                        m
                    } else if t < 0.5 {
                        a + (m - a) * 2.0 * t
                    } else {
                        m + (b - m) * (2.0 * t - 1.0)
                    }
                })
                .collect(),
        }
    }
}

/// Residual-model settings shared by the three granule sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaSettings {
    pub p_max: usize,
    pub q_max: usize,
    pub d: usize,
    /// Fixed orders for Min, Mean and Max; skips AIC selection when set.
    pub orders: Option<[ArimaOrder; 3]>,
}

impl Default for ArimaSettings {
    fn default() -> Self {
        Self {
            p_max: 3,
            q_max: 3,
            d: 0,
            orders: None,
        }
    }
}

/// Settings of the ARIMA baseline fitted to the raw monthly series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawArimaSettings {
    pub p_max: usize,
    pub q_max: usize,
    /// Differencing order; chosen by repeated ADF tests when unset.
    pub d: Option<usize>,
    pub order: Option<ArimaOrder>,
}

impl Default for RawArimaSettings {
    fn default() -> Self {
        Self {
            p_max: 3,
            q_max: 3,
            d: None,
            order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrnnSettings {
    pub sigma_start: f64,
    pub sigma_step: f64,
    pub sigma_max: f64,
}

impl Default for GrnnSettings {
    fn default() -> Self {
        Self {
            sigma_start: 0.1,
            sigma_step: 0.1,
            sigma_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub window_len: usize,
    pub lag: usize,
    pub feature_mode: FeatureMode,
    /// GA settings; its seed is replaced by per-sequence seeds derived from `seed`.
    pub ga: GaConfig,
    pub arima: ArimaSettings,
    pub raw_arima: RawArimaSettings,
    pub grnn: GrnnSettings,
    /// Last training month; when unset the final `test_windows` windows are held out.
    pub split: Option<SplitSpec>,
    pub test_windows: usize,
    pub monthly_mapping: MonthlyMapping,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            window_len: 3,
            lag: 3,
            feature_mode: FeatureMode::default(),
            ga: GaConfig::default(),
            arima: ArimaSettings::default(),
            raw_arima: RawArimaSettings::default(),
            grnn: GrnnSettings::default(),
            split: None,
            test_windows: 1,
            monthly_mapping: MonthlyMapping::default(),
            seed: DEFAULT_SEED,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len < 1 {
            return Err(Error::InvalidArgument(
                "window_len must be at least 1".into(),
            ));
        }
        if self.lag < 1 {
            return Err(Error::InvalidArgument("lag must be at least 1".into()));
        }
        if self.test_windows < 1 {
            return Err(Error::InvalidArgument(
                "test_windows must be at least 1".into(),
            ));
        }
        let g = &self.grnn;
        if !(g.sigma_start > 0.0 && g.sigma_step > 0.0 && g.sigma_max >= g.sigma_start) {
            return Err(Error::InvalidArgument(
                "GRNN sigma grid is empty or non-positive".into(),
            ));
        }
        if let Some(orders) = &self.arima.orders {
            if orders.iter().any(|o| o.d > 2) {
                return Err(Error::InvalidArgument(
                    "differencing order above 2 is not supported".into(),
                ));
            }
        }
        self.ga.validate()
    }

    /// GA configuration for one granule sequence.
    pub fn ga_for(&self, param: GranuleParam) -> GaConfig {
        GaConfig {
            seed: derive_seed(self.seed, 1 + param.index() as u64),
            ..self.ga.clone()
        }
    }
}

/// What is added to the SVR forecast of one sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResidualCorrection {
    Arima { model: ArimaModel },
    Zero { reason: String },
}

impl ResidualCorrection {
    pub fn forecast(&self, horizon: usize) -> Result<Vec<f64>> {
        match self {
            ResidualCorrection::Arima { model } => {
                forecast(model, horizon, ForecastMode::Dynamic, None)
            }
            ResidualCorrection::Zero { .. } => Ok(vec![0.0; horizon]),
        }
    }

    pub fn order(&self) -> Option<ArimaOrder> {
        match self {
            ResidualCorrection::Arima { model } => Some(model.order),
            ResidualCorrection::Zero { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceComponent {
    pub param: GranuleParam,
    pub tuning: GaResult,
    pub svr: SvrModel,
    /// In-sample SVR fit for windows `lag ..`.
    pub fitted: Vec<f64>,
    /// Observed minus fitted, original units.
    pub residuals: Vec<f64>,
    pub correction: ResidualCorrection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridModel {
    pub window_len: usize,
    pub lag: usize,
    pub feature_mode: FeatureMode,
    pub sequences: GranuleSequences,
    /// First month of the first granulated window.
    pub start: YearMonth,
    /// Min, Mean, Max in that order.
    pub components: Vec<SequenceComponent>,
    pub warnings: Vec<String>,
}

impl HybridModel {
    pub fn component(&self, param: GranuleParam) -> &SequenceComponent {
        &self.components[param.index()]
    }

    /// First month after the last granulated window.
    pub fn next_month(&self) -> YearMonth {
        self.start
            .add_months((self.sequences.len() * self.window_len) as i64)
    }
}

/// Supervised set for one sequence under the configured feature mode.
pub fn supervised_for(
    seqs: &GranuleSequences,
    param: GranuleParam,
    mode: FeatureMode,
    lag: usize,
) -> Result<SupervisedSet> {
    let target = seqs.get(param);
    match mode {
        FeatureMode::Lagged => make_supervised_multi(&[target], target, lag),
        FeatureMode::Cross => make_supervised_multi(&seqs.as_array(), target, lag),
    }
}

fn fit_correction(
    residuals: &[f64],
    settings: &ArimaSettings,
    param: GranuleParam,
) -> ResidualCorrection {
    let fitted = match &settings.orders {
        Some(orders) => estimate_arma(residuals, orders[param.index()]),
        None => {
            select_order(residuals, settings.p_max, settings.q_max, settings.d).map(|s| s.model)
        }
    };
    match fitted {
        Ok(model) => ResidualCorrection::Arima { model },
        Err(e) => ResidualCorrection::Zero {
            reason: e.to_string(),
        },
    }
}

fn fit_component(
    seqs: &GranuleSequences,
    param: GranuleParam,
    config: &ExperimentConfig,
) -> Result<SequenceComponent> {
    let data = supervised_for(seqs, param, config.feature_mode, config.lag)?;
    let ga = config.ga_for(param);
    let tuning = evolve(&data, &ga)?;
    let svr = train_svr(
        &data,
        tuning.best_params,
        ga.svr_tol,
        default_max_iter(data.len()),
    )?;
    let fitted = data
        .inputs
        .iter()
        .map(|x| svr.predict(x))
        .collect::<Result<Vec<f64>>>()?;
    let residuals: Vec<f64> = data
        .targets
        .iter()
        .zip(&fitted)
        .map(|(o, f)| o - f)
        .collect();
    let correction = fit_correction(&residuals, &config.arima, param);
    Ok(SequenceComponent {
        param,
        tuning,
        svr,
        fitted,
        residuals,
        correction,
    })
}

/// Granulates `train` and fits the three SVR + residual-ARIMA components.
pub fn fit_hybrid(train: &TimeSeries, config: &ExperimentConfig) -> Result<HybridModel> {
    config.validate()?;
    let needed = config.window_len * (config.lag + 2);
    if train.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: train.len(),
        });
    }
    let sequences = granulate_values(train.values(), config.window_len)?;
    let components = GranuleParam::ALL
        .par_iter()
        .map(|&p| fit_component(&sequences, p, config))
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    if sequences.dropped > 0 {
        warnings.push(format!(
            "{} trailing month(s) did not fill a window and were dropped",
            sequences.dropped
        ));
    }
    for c in &components {
        if !c.svr.converged {
            warnings.push(format!(
                "{} SVR stopped at the iteration limit",
                c.param.name()
            ));
        }
        if let ResidualCorrection::Zero { reason } = &c.correction {
            warnings.push(format!(
                "{} residual ARIMA failed, using zero correction: {reason}",
                c.param.name()
            ));
        }
    }
    Ok(HybridModel {
        window_len: config.window_len,
        lag: config.lag,
        feature_mode: config.feature_mode,
        sequences,
        start: train.start(),
        components,
        warnings,
    })
}

/// Forecast of one granule parameter in one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastLayer {
    pub svr: f64,
    pub residual: f64,
    pub combined: f64,
}

impl ForecastLayer {
    pub fn new(svr: f64, residual: f64) -> Self {
        Self {
            svr,
            residual,
            combined: svr + residual,
        }
    }
}

/// Element-wise hybrid combination of an SVR forecast path and a residual forecast path.
pub fn combine_layers(svr: &[f64], residual: &[f64]) -> Result<Vec<ForecastLayer>> {
    if svr.len() != residual.len() {
        return Err(Error::DimensionMismatch {
            expected: svr.len(),
            got: residual.len(),
        });
    }
    Ok(svr
        .iter()
        .zip(residual)
        .map(|(&s, &r)| ForecastLayer::new(s, r))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowForecast {
    pub window: usize,
    pub start: YearMonth,
    pub min: ForecastLayer,
    pub mean: ForecastLayer,
    pub max: ForecastLayer,
    /// Whether the combined forecasts satisfy `min <= mean <= max`.
    pub ordered: bool,
}

impl WindowForecast {
    pub fn layer(&self, param: GranuleParam) -> &ForecastLayer {
        match param {
            GranuleParam::Min => &self.min,
            GranuleParam::Mean => &self.mean,
            GranuleParam::Max => &self.max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastReport {
    pub window_len: usize,
    pub windows: Vec<WindowForecast>,
    pub warnings: Vec<String>,
}

impl ForecastReport {
    /// Forecast path of one parameter and layer (`svr`, `residual` or `combined`).
    pub fn path(&self, param: GranuleParam, pick: fn(&ForecastLayer) -> f64) -> Vec<f64> {
        self.windows.iter().map(|w| pick(w.layer(param))).collect()
    }

    pub fn monthly(&self, mapping: MonthlyMapping, pick: fn(&ForecastLayer) -> f64) -> Vec<f64> {
        self.windows
            .iter()
            .flat_map(|w| {
                mapping.expand(pick(&w.min), pick(&w.mean), pick(&w.max), self.window_len)
            })
            .collect()
    }
}

/// Recursive SVR forecasts for all three sequences, feeding forecasts back as lags.
pub fn recursive_svr(model: &HybridModel, horizon: usize) -> Result<[Vec<f64>; 3]> {
    let lag = model.lag;
    let mut hist: Vec<Vec<f64>> = model
        .sequences
        .as_array()
        .iter()
        .map(|s| s.to_vec())
        .collect();
    let mut out: [Vec<f64>; 3] = Default::default();
    for _ in 0..horizon {
        let t = hist[0].len();
        let mut step = [0.0; 3];
        for p in GranuleParam::ALL {
            let x = match model.feature_mode {
                FeatureMode::Lagged => lag_features(&[&hist[p.index()]], t, lag),
                FeatureMode::Cross => lag_features(&[&hist[0], &hist[1], &hist[2]], t, lag),
            };
            step[p.index()] = model.component(p).svr.predict(&x)?;
        }
        for (i, v) in step.into_iter().enumerate() {
            hist[i].push(v);
            out[i].push(v);
        }
    }
    Ok(out)
}

/// Forecasts `horizon` windows past the end of the training data.
pub fn forecast_hybrid(model: &HybridModel, horizon: usize) -> Result<ForecastReport> {
    if horizon < 1 {
        return Err(Error::InvalidArgument(
            "horizon must be at least 1 window".into(),
        ));
    }
    let svr = recursive_svr(model, horizon)?;
    let mut layers = Vec::with_capacity(3);
    for p in GranuleParam::ALL {
        let residual = model.component(p).correction.forecast(horizon)?;
        layers.push(combine_layers(&svr[p.index()], &residual)?);
    }
    let first = model.next_month();
    let mut warnings = model.warnings.clone();
    let windows: Vec<WindowForecast> = (0..horizon)
        .map(|h| {
            let (min, mean, max) = (layers[0][h], layers[1][h], layers[2][h]);
            let ordered = min.combined <= mean.combined && mean.combined <= max.combined;
            if !ordered {
                warnings.push(format!("forecast window {h} violates min <= mean <= max"));
            }
            WindowForecast {
                window: h,
                start: first.add_months((h * model.window_len) as i64),
                min,
                mean,
                max,
                ordered,
            }
        })
        .collect();
    Ok(ForecastReport {
        window_len: model.window_len,
        windows,
        warnings,
    })
}

/// Accuracy of one model's monthly and (if granulated) window-level forecasts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub model: String,
    pub predictions: Vec<f64>,
    pub monthly: MetricsBundle,
    /// Min, Mean, Max metrics against granulated test actuals.
    pub granule: Option<[MetricsBundle; 3]>,
}

pub fn score_predictions(model: &str, predictions: &[f64], actual: &[f64]) -> Result<ModelScore> {
    Ok(ModelScore {
        model: model.to_string(),
        predictions: predictions.to_vec(),
        monthly: evaluate(predictions, actual)?,
        granule: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub train_start: YearMonth,
    pub train_end: YearMonth,
    pub test_months: Vec<YearMonth>,
    pub actual: Vec<f64>,
    pub scores: Vec<ModelScore>,
    pub raw_arima_order: ArimaOrder,
    pub grnn_sigma: SigmaSearchResult,
    pub hybrid: HybridModel,
    pub forecast: ForecastReport,
}

impl ComparisonReport {
    pub fn score(&self, model: &str) -> Option<&ModelScore> {
        self.scores.iter().find(|s| s.model == model)
    }
}

pub const MODEL_NAMES: [&str; 4] = ["arima", "grnn", "ga-svr", "hybrid"];

/// Splits per the config, trimming leading months so training windows end where the test begins.
pub fn comparison_split(
    series: &TimeSeries,
    config: &ExperimentConfig,
) -> Result<(TimeSeries, TimeSeries)> {
    let spec = match config.split {
        Some(s) => s,
        None => {
            let hold = config.window_len * config.test_windows;
            if series.len() <= hold {
                return Err(Error::InvalidSplit(format!(
                    "series of {} months cannot hold out {hold}",
                    series.len()
                )));
            }
            SplitSpec {
                train_end: series.start().add_months((series.len() - hold - 1) as i64),
            }
        }
    };
    let (train, test) = split(series, spec)?;
    let skip = train.len() % config.window_len;
    let train = if skip == 0 {
        train
    } else {
        TimeSeries::new(
            train.start().add_months(skip as i64),
            train.values()[skip..].to_vec(),
        )?
    };
    Ok((train, test))
}

/// Differencing order for the raw baseline: difference until ADF rejects at 5%, at most twice.
pub fn adf_differencing(values: &[f64]) -> Result<usize> {
    let mut w = values.to_vec();
    for d in 0..2 {
        if adf_test(&w, AdfSpec::Constant, None)?.rejects_at(Significance::Five) {
            return Ok(d);
        }
        w = crate::arima::difference(&w, 1)?;
    }
    Ok(2)
}

fn raw_arima_forecast(
    train: &[f64],
    settings: &RawArimaSettings,
    horizon: usize,
) -> Result<(ArimaOrder, Vec<f64>)> {
    let model = match settings.order {
        Some(order) => estimate_arma(train, order)?,
        None => {
            let d = match settings.d {
                Some(d) => d,
                None => adf_differencing(train)?,
            };
            select_order(train, settings.p_max, settings.q_max, d)?.model
        }
    };
    Ok((
        model.order,
        forecast(&model, horizon, ForecastMode::Dynamic, None)?,
    ))
}

/// GRNN on lag-embedded monthly values in min-max scaled units, forecast recursively.
fn grnn_forecast(
    train: &[f64],
    lag: usize,
    settings: &GrnnSettings,
    horizon: usize,
) -> Result<(SigmaSearchResult, Vec<f64>)> {
    let scaling = ScalingState::fit(train)?;
    let z: Vec<f64> = train.iter().map(|&v| scaling.apply(v)).collect();
    let data = make_supervised_multi(&[&z], &z, lag)?;
    let search = select_sigma(
        &data.inputs,
        &data.targets,
        settings.sigma_start,
        settings.sigma_step,
        settings.sigma_max,
    )?;
    let model = GrnnModel::new(data.inputs, data.targets, search.best_sigma)?;
    let mut hist = z;
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let x = lag_features(&[&hist], hist.len(), lag);
        let next = model.predict(&x)?;
        hist.push(next);
        out.push(scaling.invert(next));
    }
    Ok((search, out))
}

fn granule_scores(
    report: &ForecastReport,
    test: &GranuleSequences,
    pick: fn(&ForecastLayer) -> f64,
) -> Result<Option<[MetricsBundle; 3]>> {
    let w = test.len();
    if w == 0 {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(3);
    for p in GranuleParam::ALL {
        let pred: Vec<f64> = report.path(p, pick)[..w].to_vec();
        out.push(evaluate(&pred, test.get(p))?);
    }
    Ok(Some([out[0], out[1], out[2]]))
}

/// Fits all four models on the same split and scores them on the test months.
pub fn compare_models(series: &TimeSeries, config: &ExperimentConfig) -> Result<ComparisonReport> {
    config.validate()?;
    let (train, test) = comparison_split(series, config)?;
    let n_test = test.len();
    let horizon = n_test.div_ceil(config.window_len);
    let actual = test.values().to_vec();

    let hybrid = fit_hybrid(&train, config)?;
    let report = forecast_hybrid(&hybrid, horizon)?;
    let (raw_order, arima_pred) = raw_arima_forecast(train.values(), &config.raw_arima, n_test)?;
    let (grnn_sigma, grnn_pred) = grnn_forecast(train.values(), config.lag, &config.grnn, n_test)?;

    let test_granules = if n_test >= config.window_len {
        granulate_values(&actual, config.window_len)?
    } else {
        GranuleSequences {
            min_seq: vec![],
            mean_seq: vec![],
            max_seq: vec![],
            window_len: config.window_len,
            dropped: n_test,
        }
    };

    let svr_pick: fn(&ForecastLayer) -> f64 = |l| l.svr;
    let combined_pick: fn(&ForecastLayer) -> f64 = |l| l.combined;
    let mut scores = vec![
        score_predictions(MODEL_NAMES[0], &arima_pred, &actual)?,
        score_predictions(MODEL_NAMES[1], &grnn_pred, &actual)?,
    ];
    for (name, pick) in [(MODEL_NAMES[2], svr_pick), (MODEL_NAMES[3], combined_pick)] {
        let monthly = report.monthly(config.monthly_mapping, pick);
        let mut s = score_predictions(name, &monthly[..n_test], &actual)?;
        s.granule = granule_scores(&report, &test_granules, pick)?;
        scores.push(s);
    }

    Ok(ComparisonReport {
        train_start: train.start(),
        train_end: train.end(),
        test_months: test.points().map(|(ym, _)| ym).collect(),
        actual,
        scores,
        raw_arima_order: raw_order,
        grnn_sigma,
        hybrid,
        forecast: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping_shapes() {
        assert_eq!(MonthlyMapping::Mean.expand(1.0, 2.0, 4.0, 3), vec![2.0; 3]);
        assert_eq!(
            MonthlyMapping::Interpolate.expand(1.0, 2.0, 4.0, 3),
            vec![1.0, 2.0, 4.0]
        );
        assert_eq!(
            MonthlyMapping::Interpolate.expand(1.0, 2.0, 4.0, 1),
            vec![2.0]
        );
        let five = MonthlyMapping::Interpolate.expand(0.0, 2.0, 6.0, 5);
        assert_eq!(five, vec![0.0, 1.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn combination_is_exact_sum() {
        let layers = combine_layers(&[1.0, 2.5], &[0.25, -3.0]).unwrap();
        assert_eq!(layers[0].combined, 1.25);
        assert_eq!(layers[1].combined, -0.5);
        assert!(combine_layers(&[1.0], &[]).is_err());
    }

    #[test]
    fn split_aligns_windows() {
        let s = TimeSeries::new(
            YearMonth::new(2001, 1).unwrap(),
            (0..20).map(f64::from).collect(),
        )
        .unwrap();
        let cfg = ExperimentConfig::default();
        let (train, test) = comparison_split(&s, &cfg).unwrap();
        assert_eq!(test.len(), 3);
        assert_eq!(train.len() % 3, 0);
        assert_eq!(train.end().succ(), test.start());
        assert_eq!(train.len(), 15);
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::default();
        assert!(c.validate().is_ok());
        c.lag = 0;
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            grnn: GrnnSettings {
                sigma_start: 0.0,
                ..GrnnSettings::default()
            },
            ..ExperimentConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn per_sequence_seeds_differ() {
        let c = ExperimentConfig::default();
        let seeds: Vec<u64> = GranuleParam::ALL
            .iter()
            .map(|&p| c.ga_for(p).seed)
            .collect();
        assert_ne!(seeds[0], seeds[1]);
        assert_ne!(seeds[1], seeds[2]);
    }
}
