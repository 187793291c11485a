//! Subcommand bodies. Each one writes its artifacts through [`Run`], which keeps
//! every path inside the output directory and records it for `run.json`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use granfore_core::arima::{
    acf, adf_test, difference, estimate_arma, ljung_box, pacf, select_order, AdfResult, AdfSpec,
    LjungBoxResult, ScanEntry,
};
use granfore_core::ga::evolve;
use granfore_core::granulation::{granulate_series, GranuleParam, GranuleSequences};
use granfore_core::pipeline::{
    adf_differencing, compare_models, fit_hybrid, forecast_hybrid, supervised_for, ForecastReport,
    ResidualCorrection, WindowForecast,
};
use granfore_core::timeseries::{load_csv, split};
use granfore_core::{
    ArimaModel, ArimaOrder, GaResult, HybridModel, MetricsBundle, MonthlyMapping, SplitSpec,
    SvrParams, TimeSeries, YearMonth,
};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::plot::{month_x, render_plot, PlotSpec, Trace};
use crate::{CliError, Command, Manifest};

type Result<T> = std::result::Result<T, CliError>;

struct Run {
    out: PathBuf,
    outputs: Vec<String>,
    warnings: Vec<String>,
}

impl Run {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })?;
        info!("wrote {name}");
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Plots are best effort: a chart that cannot be drawn becomes a warning.
    fn plot(&mut self, name: &str, traces: &[Trace], spec: PlotSpec) -> Result<()> {
        match render_plot(traces, &spec) {
            Ok(svg) => self.write(name, &svg),
            Err(e) => {
                self.warn(format!("skipped {name}: {e}"));
                Ok(())
            }
        }
    }

    fn warn(&mut self, msg: String) {
        warn!("{msg}");
        self.warnings.push(msg);
    }
}

/// Runs one subcommand and writes `run.json`; errors are collected into the manifest.
pub fn execute(command: Command, settings: Settings) -> Manifest {
    let mut run = Run {
        out: settings.out.clone(),
        outputs: Vec::new(),
        warnings: Vec::new(),
    };
    let mut errors = Vec::new();
    let result = std::fs::create_dir_all(&run.out)
        .map_err(|source| CliError::Io {
            path: run.out.clone(),
            source,
        })
        .and_then(|_| match command {
            Command::Granulate => granulate(&settings, &mut run),
            Command::Tune => tune(&settings, &mut run),
            Command::Fit => fit(&settings, &mut run),
            Command::Forecast => forecast(&settings, &mut run),
            Command::Compare => compare(&settings, &mut run),
            Command::Diagnose => diagnose(&settings, &mut run),
        });
    if let Err(e) = result {
        errors.push(e.to_string());
    }
    let mut manifest = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        seed: settings.seed,
        config: settings,
        outputs: std::mem::take(&mut run.outputs),
        warnings: std::mem::take(&mut run.warnings),
        errors,
        status: "ok",
    };
    manifest.outputs.push("run.json".into());
    if !manifest.errors.is_empty() {
        manifest.status = "error";
    }
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    if let Err(e) = std::fs::write(run.out.join("run.json"), text) {
        manifest
            .errors
            .push(format!("could not write run.json: {e}"));
        manifest.status = "error";
    }
    manifest
}

fn load_series(settings: &Settings) -> Result<TimeSeries> {
    Ok(load_csv(settings.input_path()?)?)
}

/// The configured training segment, or the whole series.
fn training_part(series: TimeSeries, settings: &Settings) -> Result<TimeSeries> {
    match settings.train_end {
        Some(train_end) => Ok(split(&series, SplitSpec { train_end })?.0),
        None => Ok(series),
    }
}

fn is_json(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text.trim_start().starts_with('{'))
}

fn load_model(path: &Path) -> Result<HybridModel> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn window_start(start: YearMonth, window_len: usize, i: usize) -> YearMonth {
    start.add_months((i * window_len) as i64)
}

fn window_xs(start: YearMonth, window_len: usize, count: usize, offset: usize) -> Vec<f64> {
    (offset..offset + count)
        .map(|i| month_x(window_start(start, window_len, i)))
        .collect()
}

fn zip_xy(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    xs.iter().copied().zip(ys.iter().copied()).collect()
}

fn granules_csv(seqs: &GranuleSequences, start: YearMonth) -> String {
    let mut s = String::from("window,start,a,m,b\n");
    for g in seqs.granules() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            g.window_index,
            window_start(start, seqs.window_len, g.window_index),
            g.a,
            g.m,
            g.b
        );
    }
    s
}

fn month_axis(title: String) -> PlotSpec {
    PlotSpec {
        title,
        x_label: "year".into(),
        y_label: "value".into(),
    }
}

fn granulate(settings: &Settings, run: &mut Run) -> Result<()> {
    let series = load_series(settings)?;
    let seqs = granulate_series(&series, settings.window_len)?;
    if seqs.dropped > 0 {
        run.warn(format!(
            "{} trailing month(s) did not fill a window and were dropped",
            seqs.dropped
        ));
    }
    run.write("granules.csv", &granules_csv(&seqs, series.start()))?;
    let xs = window_xs(series.start(), seqs.window_len, seqs.len(), 0);
    let mut traces = vec![Trace::new(
        "monthly",
        series.points().map(|(ym, v)| (month_x(ym), v)).collect(),
    )];
    for p in GranuleParam::ALL {
        traces.push(Trace::new(p.name(), zip_xy(&xs, seqs.get(p))));
    }
    run.plot(
        "granules.svg",
        &traces,
        month_axis(format!("Granules, window {}", seqs.window_len)),
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TuningEntry {
    pub param: GranuleParam,
    pub seed: u64,
    pub best_params: SvrParams,
    pub best_fitness: f64,
    pub history: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TuningFile {
    pub window_len: usize,
    pub lag: usize,
    pub sequences: Vec<TuningEntry>,
}

fn tune(settings: &Settings, run: &mut Run) -> Result<()> {
    let cfg = settings.experiment()?;
    let train = training_part(load_series(settings)?, settings)?;
    let seqs = granulate_series(&train, cfg.window_len)?;
    let mut entries = Vec::new();
    for p in GranuleParam::ALL {
        let data = supervised_for(&seqs, p, cfg.feature_mode, cfg.lag)?;
        let ga = cfg.ga_for(p);
        info!("tuning {} on {} samples", p.name(), data.len());
        let res: GaResult = evolve(&data, &ga)?;
        entries.push(TuningEntry {
            param: p,
            seed: ga.seed,
            best_params: res.best_params,
            best_fitness: res.best_fitness,
            history: res.history,
        });
    }
    let traces: Vec<Trace> = entries
        .iter()
        .map(|e| Trace::from_values(e.param.name(), 1.0, 1.0, &e.history))
        .collect();
    run.json(
        "tuning.json",
        &TuningFile {
            window_len: cfg.window_len,
            lag: cfg.lag,
            sequences: entries,
        },
    )?;
    run.plot(
        "ga_history.svg",
        &traces,
        PlotSpec {
            title: "Best CV fitness by generation".into(),
            x_label: "generation".into(),
            y_label: "CV MSE (scaled)".into(),
        },
    )
}

fn residuals_csv(model: &HybridModel) -> String {
    let mut s = String::from("window,start,min,mean,max\n");
    let n = model.components[0].residuals.len();
    for i in 0..n {
        let w = i + model.lag;
        let r: Vec<String> = model
            .components
            .iter()
            .map(|c| c.residuals[i].to_string())
            .collect();
        let _ = writeln!(
            s,
            "{w},{},{}",
            window_start(model.start, model.window_len, w),
            r.join(",")
        );
    }
    s
}

fn fit_plots(model: &HybridModel, run: &mut Run, forecast: Option<&ForecastReport>) -> Result<()> {
    let w = model.sequences.len();
    let xs = window_xs(model.start, model.window_len, w, 0);
    for c in &model.components {
        let actual = model.sequences.get(c.param);
        let mut traces = vec![
            Trace::new("actual", zip_xy(&xs, actual)),
            Trace::new("fitted", zip_xy(&xs[model.lag..], &c.fitted)),
        ];
        if let Some(rep) = forecast {
            // joined to the last observed window so a single-window forecast still draws
            let mut pts = vec![(xs[w - 1], actual[w - 1])];
            pts.extend(
                rep.windows
                    .iter()
                    .map(|win| (month_x(win.start), win.layer(c.param).combined)),
            );
            traces.push(Trace::new("forecast", pts));
        }
        run.plot(
            &format!("fit_{}.svg", c.param.name()),
            &traces,
            month_axis(format!("{} sequence", c.param.name())),
        )?;
    }
    Ok(())
}

fn fit_model(settings: &Settings, run: &mut Run) -> Result<HybridModel> {
    let cfg = settings.experiment()?;
    let train = training_part(load_series(settings)?, settings)?;
    let model = fit_hybrid(&train, &cfg)?;
    for w in &model.warnings {
        run.warn(w.clone());
    }
    Ok(model)
}

fn fit(settings: &Settings, run: &mut Run) -> Result<()> {
    let model = fit_model(settings, run)?;
    run.json("model.json", &model)?;
    run.write("residuals.csv", &residuals_csv(&model))?;
    fit_plots(&model, run, None)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MonthValue {
    pub month: YearMonth,
    pub value: f64,
}

/// Contents of `forecast.json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ForecastFile {
    pub window_len: usize,
    pub horizon: usize,
    pub monthly_mapping: MonthlyMapping,
    pub windows: Vec<WindowForecast>,
    /// Combined forecasts spread over the months of each window.
    pub monthly: Vec<MonthValue>,
    pub warnings: Vec<String>,
}

impl ForecastFile {
    fn new(report: &ForecastReport, mapping: MonthlyMapping) -> Self {
        let first = report.windows.first().map(|w| w.start);
        let monthly = report
            .monthly(mapping, |l| l.combined)
            .into_iter()
            .enumerate()
            .map(|(i, value)| MonthValue {
                month: first.expect("non-empty report").add_months(i as i64),
                value,
            })
            .collect();
        Self {
            window_len: report.window_len,
            horizon: report.windows.len(),
            monthly_mapping: mapping,
            windows: report.windows.clone(),
            monthly,
            warnings: report.warnings.clone(),
        }
    }
}

fn forecast(settings: &Settings, run: &mut Run) -> Result<()> {
    let input = settings.input_path()?;
    let model = if is_json(input)? {
        let m = load_model(input)?;
        for w in &m.warnings {
            run.warn(w.clone());
        }
        m
    } else {
        let m = fit_model(settings, run)?;
        run.json("model.json", &m)?;
        m
    };
    let report = forecast_hybrid(&model, settings.horizon)?;
    for w in report.windows.iter().filter(|w| !w.ordered) {
        run.warn(format!(
            "forecast window {} violates min <= mean <= max",
            w.window
        ));
    }
    run.json(
        "forecast.json",
        &ForecastFile::new(&report, settings.monthly_mapping),
    )?;
    fit_plots(&model, run, Some(&report))
}

#[derive(Debug, Serialize)]
struct ComparisonSummary<'a> {
    train_start: YearMonth,
    train_end: YearMonth,
    test_months: &'a [YearMonth],
    actual: &'a [f64],
    raw_arima_order: ArimaOrder,
    grnn_sigma: f64,
    residual_orders: Vec<Option<ArimaOrder>>,
    scores: &'a [granfore_core::pipeline::ModelScore],
}

fn metrics_row(s: &mut String, model: &str, level: &str, m: &MetricsBundle) {
    let _ = writeln!(
        s,
        "{model},{level},{},{},{},{}",
        m.mse, m.rmse, m.mae, m.mape_percent
    );
}

fn compare(settings: &Settings, run: &mut Run) -> Result<()> {
    let cfg = settings.experiment()?;
    let series = load_series(settings)?;
    let rep = compare_models(&series, &cfg)?;
    for w in &rep.forecast.warnings {
        run.warn(w.clone());
    }

    let mut table = String::from("model,level,mse,rmse,mae,mape_percent\n");
    for s in &rep.scores {
        metrics_row(&mut table, &s.model, "monthly", &s.monthly);
        if let Some(g) = &s.granule {
            for (p, m) in GranuleParam::ALL.iter().zip(g) {
                metrics_row(&mut table, &s.model, p.name(), m);
            }
        }
    }
    run.write("comparison.csv", &table)?;

    let mut preds = String::from("month,actual");
    for s in &rep.scores {
        let _ = write!(preds, ",{}", s.model);
    }
    preds.push('\n');
    for (i, (ym, a)) in rep.test_months.iter().zip(&rep.actual).enumerate() {
        let _ = write!(preds, "{ym},{a}");
        for s in &rep.scores {
            let _ = write!(preds, ",{}", s.predictions[i]);
        }
        preds.push('\n');
    }
    run.write("predictions.csv", &preds)?;

    let mut curve = String::from("sigma,loocv_mse\n");
    for (sigma, mse) in &rep.grnn_sigma.curve {
        let _ = writeln!(curve, "{sigma},{mse}");
    }
    run.write("grnn_sigma_curve.csv", &curve)?;

    run.json(
        "comparison.json",
        &ComparisonSummary {
            train_start: rep.train_start,
            train_end: rep.train_end,
            test_months: &rep.test_months,
            actual: &rep.actual,
            raw_arima_order: rep.raw_arima_order,
            grnn_sigma: rep.grnn_sigma.best_sigma,
            residual_orders: rep
                .hybrid
                .components
                .iter()
                .map(|c| c.correction.order())
                .collect(),
            scores: &rep.scores,
        },
    )?;
    run.json("model.json", &rep.hybrid)?;
    run.json(
        "forecast.json",
        &ForecastFile::new(&rep.forecast, cfg.monthly_mapping),
    )?;

    // the last two years of training data, then the test months
    let keep = series
        .points()
        .filter(|(ym, _)| *ym <= rep.train_end && rep.train_end.months_until(*ym) > -24)
        .chain(
            series
                .points()
                .filter(|(ym, _)| rep.test_months.contains(ym)),
        )
        .map(|(ym, v)| (month_x(ym), v))
        .collect();
    let xs: Vec<f64> = rep.test_months.iter().map(|ym| month_x(*ym)).collect();
    let mut traces = vec![Trace::new("actual", keep)];
    for s in &rep.scores {
        traces.push(Trace::new(s.model.clone(), zip_xy(&xs, &s.predictions)));
    }
    run.plot(
        "comparison.svg",
        &traces,
        month_axis("Held-out months".into()),
    )?;
    run.plot(
        "grnn_sigma_curve.svg",
        &[Trace::new("LOOCV MSE", rep.grnn_sigma.curve.clone())],
        PlotSpec {
            title: "GRNN smoothing search".into(),
            x_label: "sigma".into(),
            y_label: "LOOCV MSE (scaled)".into(),
        },
    )?;
    fit_plots(&rep.hybrid, run, Some(&rep.forecast))
}

#[derive(Debug, Serialize)]
struct AdfLevel {
    d: usize,
    result: AdfResult,
}

#[derive(Debug, Serialize)]
struct ModelSummary {
    order: ArimaOrder,
    intercept: f64,
    ar_coeffs: Vec<f64>,
    ma_coeffs: Vec<f64>,
    sigma2: f64,
    aic: f64,
}

impl ModelSummary {
    fn new(m: &ArimaModel) -> Self {
        Self {
            order: m.order,
            intercept: m.intercept,
            ar_coeffs: m.ar_coeffs.clone(),
            ma_coeffs: m.ma_coeffs.clone(),
            sigma2: m.sigma2,
            aic: granfore_core::arima::aic(m),
        }
    }
}

#[derive(Debug, Serialize)]
struct SeriesDiagnostics {
    source: &'static str,
    n: usize,
    adf: Vec<AdfLevel>,
    d: usize,
    acf_lags: usize,
    model: ModelSummary,
    order_scan: Option<Vec<ScanEntry>>,
    ljung_box: LjungBoxResult,
}

#[derive(Debug, Serialize)]
struct SequenceDiagnostics {
    param: GranuleParam,
    n: usize,
    correction: Option<ModelSummary>,
    /// Ljung-Box on the SVR residuals.
    residual_ljung_box: LjungBoxResult,
    /// Ljung-Box on the innovations of the residual ARIMA.
    innovation_ljung_box: Option<LjungBoxResult>,
}

#[derive(Debug, Serialize)]
struct ModelDiagnostics {
    source: &'static str,
    acf_lags: usize,
    sequences: Vec<SequenceDiagnostics>,
}

fn lag_count(n: usize, wanted: usize) -> Result<usize> {
    let lags = wanted.min(n / 2);
    if lags < 1 {
        return Err(CliError::Core(granfore_core::Error::TooShort {
            needed: 2,
            got: n,
        }));
    }
    Ok(lags)
}

fn correlogram_csv(columns: &[(&str, Vec<f64>)]) -> String {
    let mut s = String::from("lag");
    for (name, _) in columns {
        let _ = write!(s, ",{name}");
    }
    s.push('\n');
    let rows = columns.iter().map(|c| c.1.len()).min().unwrap_or(0);
    for i in 0..rows {
        // acf rows start at lag 0, pacf rows at lag 1
        let _ = write!(s, "{}", i + columns[0].1.len() - rows);
        for (_, col) in columns {
            let _ = write!(s, ",{}", col[i]);
        }
        s.push('\n');
    }
    s
}

fn correlogram_plot(
    run: &mut Run,
    name: &str,
    title: &str,
    columns: &[(&str, Vec<f64>)],
    first_lag: usize,
) -> Result<()> {
    let traces: Vec<Trace> = columns
        .iter()
        .map(|(label, v)| Trace::from_values(*label, first_lag as f64, 1.0, v))
        .collect();
    run.plot(
        name,
        &traces,
        PlotSpec {
            title: title.into(),
            x_label: "lag".into(),
            y_label: "correlation".into(),
        },
    )
}

fn diagnose(settings: &Settings, run: &mut Run) -> Result<()> {
    let input = settings.input_path()?;
    if is_json(input)? {
        return diagnose_model(&load_model(input)?, settings, run);
    }
    let series = training_part(load_series(settings)?, settings)?;
    let values = series.values();

    let mut adf = Vec::new();
    let mut w = values.to_vec();
    for d in 0..=2 {
        match adf_test(&w, AdfSpec::Constant, None) {
            Ok(result) => adf.push(AdfLevel { d, result }),
            Err(e) => run.warn(format!("ADF at d = {d}: {e}")),
        }
        if d < 2 {
            w = difference(&w, 1)?;
        }
    }
    let d = match settings.raw_d {
        Some(d) => d,
        None => adf_differencing(values)?,
    };
    let w = difference(values, d)?;
    let lags = lag_count(w.len(), settings.acf_lags)?;
    let r = acf(&w, lags)?;
    let pr = pacf(&w, lags)?;

    let fixed = match settings.raw_order()? {
        Some(o) => Some(o),
        None => match settings.residual_orders()? {
            Some([a, b, c]) if a == b && b == c => Some(a),
            Some(_) => {
                return Err(CliError::Config(
                    "diagnose takes a single p,d,q order".into(),
                ))
            }
            None => None,
        },
    };
    let (model, scan) = match fixed {
        Some(order) => (estimate_arma(values, order)?, None),
        None => {
            let sel = select_order(values, settings.raw_p_max, settings.raw_q_max, d)?;
            (sel.model, Some(sel.table))
        }
    };
    let lb_lags = lag_count(model.residuals.len(), settings.acf_lags)?;
    let lb = ljung_box(&model.residuals, lb_lags, model.param_count())?;
    if lb.lags.last().is_some_and(|l| l.p_value < 0.05) {
        run.warn(format!(
            "ARIMA{} residuals fail Ljung-Box at lag {lb_lags}",
            model.order
        ));
    }

    run.write("acf.csv", &correlogram_csv(&[("acf", r.clone())]))?;
    run.write("pacf.csv", &correlogram_csv(&[("pacf", pr.clone())]))?;
    run.json(
        "diagnostics.json",
        &SeriesDiagnostics {
            source: "series",
            n: values.len(),
            adf,
            d,
            acf_lags: lags,
            model: ModelSummary::new(&model),
            order_scan: scan,
            ljung_box: lb,
        },
    )?;
    correlogram_plot(run, "acf.svg", &format!("ACF, d = {d}"), &[("acf", r)], 0)?;
    correlogram_plot(
        run,
        "pacf.svg",
        &format!("PACF, d = {d}"),
        &[("pacf", pr)],
        1,
    )
}

fn diagnose_model(model: &HybridModel, settings: &Settings, run: &mut Run) -> Result<()> {
    let n = model.components[0].residuals.len();
    let lags = lag_count(n, settings.acf_lags)?;
    let mut acfs = Vec::new();
    let mut pacfs = Vec::new();
    let mut sequences = Vec::new();
    for c in &model.components {
        acfs.push((c.param.name(), acf(&c.residuals, lags)?));
        pacfs.push((c.param.name(), pacf(&c.residuals, lags)?));
        let (correction, innovation_ljung_box) = match &c.correction {
            ResidualCorrection::Arima { model: m } => {
                let k = lag_count(m.residuals.len(), settings.acf_lags)?;
                (
                    Some(ModelSummary::new(m)),
                    Some(ljung_box(&m.residuals, k, m.param_count())?),
                )
            }
            ResidualCorrection::Zero { .. } => (None, None),
        };
        if innovation_ljung_box
            .as_ref()
            .and_then(|lb| lb.lags.last())
            .is_some_and(|l| l.p_value < 0.05)
        {
            run.warn(format!(
                "{} residual ARIMA innovations fail Ljung-Box",
                c.param.name()
            ));
        }
        sequences.push(SequenceDiagnostics {
            param: c.param,
            n: c.residuals.len(),
            correction,
            residual_ljung_box: ljung_box(&c.residuals, lags, 0)?,
            innovation_ljung_box,
        });
    }
    run.write("acf.csv", &correlogram_csv(&acfs))?;
    run.write("pacf.csv", &correlogram_csv(&pacfs))?;
    run.json(
        "diagnostics.json",
        &ModelDiagnostics {
            source: "model",
            acf_lags: lags,
            sequences,
        },
    )?;
    correlogram_plot(run, "acf.svg", "ACF of SVR residuals", &acfs, 0)?;
    correlogram_plot(run, "pacf.svg", "PACF of SVR residuals", &pacfs, 1)
}
