use serde::{Deserialize, Serialize};

use super::diff::{cumulate, difference, integration_anchors};
use super::estimate::css_innovations;
use super::ArimaModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForecastMode {
    /// One-step-ahead forecasts that consume observed values as they arrive.
    Static,
    /// Recursive multi-step forecasts fed back as lagged values.
    #[default]
    Dynamic,
}

impl ArimaModel {
    fn innovations_for(&self, w: &[f64]) -> Vec<f64> {
        let mut u = vec![0.0; self.conditioning];
        u.extend(css_innovations(
            w,
            self.intercept,
            &self.ar_coeffs,
            &self.ma_coeffs,
            self.conditioning,
        ));
        u
    }

    /// One-step forecast of the next differenced value given the full past.
    fn next_diff(&self, w: &[f64], u: &[f64]) -> f64 {
        let n = w.len();
        let mut f = self.intercept;
        for (i, phi) in self.ar_coeffs.iter().enumerate() {
            if n > i {
                f += phi * w[n - 1 - i];
            }
        }
        for (j, theta) in self.ma_coeffs.iter().enumerate() {
            if n > j {
                f += theta * u[n - 1 - j];
            }
        }
        f
    }

    /// Process mean of the differenced series.
    pub fn process_mean(&self) -> f64 {
        self.intercept / (1.0 - self.ar_coeffs.iter().sum::<f64>())
    }
}

/// Forecasts `horizon` future values on the original (undifferenced) scale.
pub fn forecast(
    model: &ArimaModel,
    horizon: usize,
    mode: ForecastMode,
    actuals: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if horizon < 1 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let d = model.order.d;
    let mut levels = model.history.clone();
    let mut w = difference(&levels, d)?;
    let mut u = model.innovations_for(&w);

    match mode {
        ForecastMode::Dynamic => {
            let mut diffs = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                let f = model.next_diff(&w, &u);
                w.push(f);
                u.push(0.0);
                diffs.push(f);
            }
            Ok(cumulate(&diffs, &integration_anchors(&levels, d)))
        }
        ForecastMode::Static => {
            let actuals = actuals.unwrap_or(&[]);
            if actuals.len() + 1 < horizon {
                return Err(Error::InvalidArgument(format!(
                    "static forecasting {horizon} steps needs {} actual values, got {}",
                    horizon - 1,
                    actuals.len()
                )));
            }
            let mut out = Vec::with_capacity(horizon);
            for h in 0..horizon {
                let f = model.next_diff(&w, &u);
                out.push(cumulate(&[f], &integration_anchors(&levels, d))[0]);
                if h + 1 < horizon {
                    levels.push(actuals[h]);
                    let observed = *difference(&levels, d)?.last().expect("non-empty");
                    w.push(observed);
                    u.push(observed - f);
                }
            }
            Ok(out)
        }
    }
}
