//! ARIMA modelling: differencing, stationarity and white-noise diagnostics,
//! CSS estimation with AIC order search, and static/dynamic forecasting.

mod acf;
mod adf;
mod diff;
mod estimate;
mod forecast;
mod ljung_box;
mod ols;
mod optim;

use serde::{Deserialize, Serialize};

pub use acf::{acf, pacf};
pub use adf::{
    adf_test, critical_values, schwert_max_lag, AdfResult, AdfSpec, CriticalValues, Significance,
};
pub use diff::{cumulate, difference};
pub use estimate::{
    aic, ar_is_stationary, estimate_arma, estimate_conditioned, has_near_unit_root,
    ma_is_invertible, max_inverse_root, select_order, OrderSelection, ScanEntry, NEAR_UNIT_ROOT,
};
pub use forecast::{forecast, ForecastMode};
pub use ljung_box::{ljung_box, LjungBoxLag, LjungBoxResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.d, self.q)
    }
}

/// A fitted ARIMA(p, d, q) with intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub intercept: f64,
    pub ar_coeffs: Vec<f64>,
    pub ma_coeffs: Vec<f64>,
    pub sigma2: f64,
    pub sse: f64,
    /// In-sample innovations after differencing and conditioning.
    pub residuals: Vec<f64>,
    pub n_obs: usize,
    /// Number of leading differenced values conditioned on.
    pub conditioning: usize,
    /// Undifferenced data the model was fitted to.
    pub history: Vec<f64>,
}

impl ArimaModel {
    pub fn param_count(&self) -> usize {
        self.order.p + self.order.q
    }
}
