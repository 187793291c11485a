//! Flat JSON run configuration with command-line overrides.

use std::path::{Path, PathBuf};

use granfore_core::ga::FoldMode;
use granfore_core::pipeline::{ArimaSettings, GrnnSettings, RawArimaSettings, DEFAULT_SEED};
use granfore_core::svr::DEFAULT_TOL;
use granfore_core::{
    ArimaOrder, ExperimentConfig, FeatureMode, GaConfig, GenomeEncoding, MonthlyMapping,
    ParamRange, RangeScale, SplitSpec, YearMonth,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Every tunable of a run. Serialized as one flat JSON object; missing keys take these defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub verbosity: u8,

    pub window_len: usize,
    pub lag: usize,
    pub feature_mode: FeatureMode,
    pub horizon: usize,

    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub bits_per_param: u32,
    pub encoding: GenomeEncoding,
    pub c_min: f64,
    pub c_max: f64,
    pub c_scale: RangeScale,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_scale: RangeScale,
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_scale: RangeScale,
    pub folds: usize,
    pub fold_mode: FoldMode,
    pub svr_tol: f64,

    pub p_max: usize,
    pub q_max: usize,
    pub d: usize,
    /// `p,d,q` for all sequences or `p,d,q;p,d,q;p,d,q` for Min, Mean, Max.
    pub orders: Option<String>,

    pub raw_p_max: usize,
    pub raw_q_max: usize,
    /// Differencing of the raw baseline; ADF decides when unset.
    pub raw_d: Option<usize>,
    pub raw_order: Option<String>,

    pub sigma_start: f64,
    pub sigma_step: f64,
    pub sigma_max: f64,

    pub train_end: Option<YearMonth>,
    pub test_windows: usize,
    pub monthly_mapping: MonthlyMapping,
    pub acf_lags: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let ga = GaConfig::default();
        let arima = ArimaSettings::default();
        let raw = RawArimaSettings::default();
        let grnn = GrnnSettings::default();
        let exp = ExperimentConfig::default();
        Self {
            input: None,
            out: PathBuf::from("out"),
            seed: DEFAULT_SEED,
            verbosity: 0,
            window_len: exp.window_len,
            lag: exp.lag,
            feature_mode: exp.feature_mode,
            horizon: 1,
            population: ga.population,
            generations: ga.generations,
            crossover_prob: ga.crossover_prob,
            mutation_prob: ga.mutation_prob,
            bits_per_param: ga.bits_per_param,
            encoding: ga.encoding,
            c_min: ga.c_range.low,
            c_max: ga.c_range.high,
            c_scale: ga.c_range.scale,
            gamma_min: ga.gamma_range.low,
            gamma_max: ga.gamma_range.high,
            gamma_scale: ga.gamma_range.scale,
            epsilon_min: ga.epsilon_range.low,
            epsilon_max: ga.epsilon_range.high,
            epsilon_scale: ga.epsilon_range.scale,
            folds: ga.folds,
            fold_mode: ga.fold_mode,
            svr_tol: DEFAULT_TOL,
            p_max: arima.p_max,
            q_max: arima.q_max,
            d: arima.d,
            orders: None,
            raw_p_max: raw.p_max,
            raw_q_max: raw.q_max,
            raw_d: raw.d,
            raw_order: None,
            sigma_start: grnn.sigma_start,
            sigma_step: grnn.sigma_step,
            sigma_max: grnn.sigma_max,
            train_end: None,
            test_windows: exp.test_windows,
            monthly_mapping: exp.monthly_mapping,
            acf_lags: 20,
        }
    }
}

/// Values given on the command line; each one that is set replaces the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub window_len: Option<usize>,
    pub lag: Option<usize>,
    pub horizon: Option<usize>,
    pub orders: Option<String>,
    pub verbosity: u8,
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Pretty JSON with a trailing newline; feeding it back through [`Settings::from_json`] reproduces it.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("settings always serialize");
        s.push('\n');
        s
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.input {
            self.input = Some(v.clone());
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.window_len {
            self.window_len = v;
        }
        if let Some(v) = o.lag {
            self.lag = v;
        }
        if let Some(v) = o.horizon {
            self.horizon = v;
        }
        if let Some(v) = &o.orders {
            self.orders = Some(v.clone());
        }
        if o.verbosity > 0 {
            self.verbosity = o.verbosity;
        }
    }

    pub fn input_path(&self) -> Result<&Path, CliError> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Config("no input path: pass --input or set \"input\"".into()))
    }

    /// Residual orders for Min, Mean and Max, if configured.
    pub fn residual_orders(&self) -> Result<Option<[ArimaOrder; 3]>, CliError> {
        let Some(text) = &self.orders else {
            return Ok(None);
        };
        let list = parse_orders(text)?;
        match list.as_slice() {
            [o] => Ok(Some([*o; 3])),
            [a, b, c] => Ok(Some([*a, *b, *c])),
            _ => Err(CliError::Config(format!(
                "orders {text:?}: expected one or three p,d,q triples"
            ))),
        }
    }

    pub fn raw_order(&self) -> Result<Option<ArimaOrder>, CliError> {
        let Some(text) = &self.raw_order else {
            return Ok(None);
        };
        match parse_orders(text)?.as_slice() {
            [o] => Ok(Some(*o)),
            _ => Err(CliError::Config(format!(
                "raw_order {text:?}: expected one p,d,q triple"
            ))),
        }
    }

    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let range = |low, high, scale| ParamRange { low, high, scale };
        let cfg = ExperimentConfig {
            window_len: self.window_len,
            lag: self.lag,
            feature_mode: self.feature_mode,
            ga: GaConfig {
                population: self.population,
                generations: self.generations,
                crossover_prob: self.crossover_prob,
                mutation_prob: self.mutation_prob,
                bits_per_param: self.bits_per_param,
                encoding: self.encoding,
                c_range: range(self.c_min, self.c_max, self.c_scale),
                gamma_range: range(self.gamma_min, self.gamma_max, self.gamma_scale),
                epsilon_range: range(self.epsilon_min, self.epsilon_max, self.epsilon_scale),
                folds: self.folds,
                fold_mode: self.fold_mode,
                svr_tol: self.svr_tol,
                seed: self.seed,
            },
            arima: ArimaSettings {
                p_max: self.p_max,
                q_max: self.q_max,
                d: self.d,
                orders: self.residual_orders()?,
            },
            raw_arima: RawArimaSettings {
                p_max: self.raw_p_max,
                q_max: self.raw_q_max,
                d: self.raw_d,
                order: self.raw_order()?,
            },
            grnn: GrnnSettings {
                sigma_start: self.sigma_start,
                sigma_step: self.sigma_step,
                sigma_max: self.sigma_max,
            },
            split: self.train_end.map(|train_end| SplitSpec { train_end }),
            test_windows: self.test_windows,
            monthly_mapping: self.monthly_mapping,
            seed: self.seed,
        };
        cfg.validate()?;
        if self.horizon < 1 {
            return Err(CliError::Config("horizon must be at least 1 window".into()));
        }
        Ok(cfg)
    }
}

/// Parses `p,d,q[;p,d,q...]`.
pub fn parse_orders(text: &str) -> Result<Vec<ArimaOrder>, CliError> {
    text.split(';')
        .map(|triple| {
            let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
            let nums: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
            match nums.as_deref() {
                Some(&[p, d, q]) => Ok(ArimaOrder { p, d, q }),
                _ => Err(CliError::Config(format!("order {triple:?} is not p,d,q"))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let s = Settings::from_json("{}").unwrap();
        assert_eq!(s, Settings::default());
        assert_eq!(
            (s.window_len, s.lag, s.population, s.generations, s.folds),
            (3, 3, 20, 200, 5)
        );
        assert_eq!(s.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_keys_and_bad_types_are_rejected() {
        assert!(Settings::from_json(r#"{"window": 3}"#).is_err());
        assert!(Settings::from_json(r#"{"window_len": "three"}"#).is_err());
        assert!(Settings::from_json(r#"{"lag": -1}"#).is_err());
        assert!(Settings::from_json("[1]").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let mut s = Settings::from_json(r#"{"window_len": 3, "lag": 2, "seed": 9}"#).unwrap();
        s.apply(&Overrides {
            window_len: Some(4),
            ..Overrides::default()
        });
        assert_eq!((s.window_len, s.lag, s.seed), (4, 2, 9));
    }

    #[test]
    fn dump_round_trips() {
        let mut s = Settings::default();
        s.orders = Some("1,0,5;1,0,2;1,0,2".into());
        s.train_end = Some(YearMonth::new(2016, 9).unwrap());
        s.svr_tol = 0.1 + 0.2;
        let text = s.to_json();
        let back = Settings::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn order_lists() {
        assert_eq!(
            parse_orders("1,0,2").unwrap(),
            vec![ArimaOrder { p: 1, d: 0, q: 2 }]
        );
        assert_eq!(parse_orders("1,0,5; 1,0,2;1,0,2").unwrap().len(), 3);
        assert!(parse_orders("1,0").is_err());
        assert!(parse_orders("a,b,c").is_err());
        let s = Settings {
            orders: Some("1,0,1;2,0,0".into()),
            ..Settings::default()
        };
        assert!(s.residual_orders().is_err());
        let s = Settings {
            orders: Some("2,0,1".into()),
            ..Settings::default()
        };
        assert_eq!(
            s.residual_orders().unwrap(),
            Some([ArimaOrder { p: 2, d: 0, q: 1 }; 3])
        );
    }

    #[test]
    fn experiment_validation_surfaces() {
        assert!(Settings::default().experiment().is_ok());
        assert!(Settings {
            lag: 0,
            ..Settings::default()
        }
        .experiment()
        .is_err());
        assert!(Settings {
            horizon: 0,
            ..Settings::default()
        }
        .experiment()
        .is_err());
    }
}
