//! Augmented Dickey-Fuller unit-root test against tabulated critical values.

use serde::{Deserialize, Serialize};

use super::ols::ols;
use crate::error::{Error, Result};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdfSpec {
    None,
    Constant,
    ConstantTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Significance {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub one: f64,
    pub five: f64,
    pub ten: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub spec: AdfSpec,
    pub lags_used: usize,
    pub nobs: usize,
    pub critical_values: CriticalValues,
    /// Smallest tabulated level at which the unit root is rejected.
    pub reject_at: Option<Significance>,
}

impl AdfResult {
    pub fn rejects_at(&self, level: Significance) -> bool {
        let cv = match level {
            Significance::One => self.critical_values.one,
            Significance::Five => self.critical_values.five,
            Significance::Ten => self.critical_values.ten,
        };
        self.statistic < cv
    }
}

const SAMPLE_SIZES: [f64; 5] = [25.0, 50.0, 100.0, 250.0, 500.0];

// Dickey-Fuller tau tables (Fuller 1976): rows per sample size, last entry is the
// asymptotic value; columns 1%, 5%, 10%.
const TAU_NONE: [[f64; 3]; 6] = [
    [-2.66, -1.95, -1.60],
    [-2.62, -1.95, -1.61],
    [-2.60, -1.95, -1.61],
    [-2.58, -1.95, -1.62],
    [-2.58, -1.95, -1.62],
    [-2.58, -1.95, -1.62],
];
const TAU_CONSTANT: [[f64; 3]; 6] = [
    [-3.75, -3.00, -2.63],
    [-3.58, -2.93, -2.60],
    [-3.51, -2.89, -2.58],
    [-3.46, -2.88, -2.57],
    [-3.44, -2.87, -2.57],
    [-3.43, -2.86, -2.57],
];
const TAU_TREND: [[f64; 3]; 6] = [
    [-4.38, -3.60, -3.24],
    [-4.15, -3.50, -3.18],
    [-4.04, -3.45, -3.15],
    [-3.99, -3.43, -3.13],
    [-3.98, -3.42, -3.13],
    [-3.96, -3.41, -3.12],
];

/// Critical values for `spec` at `nobs` regression observations, linearly
/// interpolated in `n` between table rows and in `1/n` beyond the largest row.
pub fn critical_values(spec: AdfSpec, nobs: usize) -> CriticalValues {
    let table = match spec {
        AdfSpec::None => &TAU_NONE,
        AdfSpec::Constant => &TAU_CONSTANT,
        AdfSpec::ConstantTrend => &TAU_TREND,
    };
    let n = nobs as f64;
    let row = if n <= SAMPLE_SIZES[0] {
        table[0]
    } else if n >= SAMPLE_SIZES[4] {
        let w = SAMPLE_SIZES[4] / n;
        lerp(table[5], table[4], w)
    } else {
        let hi = SAMPLE_SIZES
            .iter()
            .position(|&s| s >= n)
            .expect("n below largest row");
        let (n0, n1) = (SAMPLE_SIZES[hi - 1], SAMPLE_SIZES[hi]);
        lerp(table[hi - 1], table[hi], (n - n0) / (n1 - n0))
    };
    CriticalValues {
        one: row[0],
        five: row[1],
        ten: row[2],
    }
}

fn lerp(a: [f64; 3], b: [f64; 3], w: f64) -> [f64; 3] {
    [0, 1, 2].map(|i| a[i] + w * (b[i] - a[i]))
}

/// Schwert's rule `floor(12 (n/100)^{1/4})`.
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

struct AdfRegression {
    stat: f64,
    sse: f64,
    nobs: usize,
    nparams: usize,
}

/// Test regression with `k` augmentation lags on observations `t >= start`.
fn regress(y: &[f64], spec: AdfSpec, k: usize, start: usize) -> Option<AdfRegression> {
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // dy[t-1] = y[t] - y[t-1]; the row for y[t] needs dy[t-1-i] for i in 1..=k
    let mut rows = Vec::new();
    let mut target = Vec::new();
    for t in start.max(k + 1)..y.len() {
        let mut row = vec![y[t - 1]];
        match spec {
            AdfSpec::None => {}
            AdfSpec::Constant => row.push(1.0),
            AdfSpec::ConstantTrend => {
                row.push(1.0);
                row.push(t as f64);
            }
        }
        for i in 1..=k {
            row.push(dy[t - 1 - i]);
        }
        rows.push(row);
        target.push(dy[t - 1]);
    }
    let fit = ols(&rows, &target)?;
    Some(AdfRegression {
        stat: fit.coeffs[0] / fit.std_errors[0],
        sse: fit.sse,
        nobs: fit.nobs,
        nparams: rows[0].len(),
    })
}

/// Augmented Dickey-Fuller test. With `max_lag` absent the augmentation order is
/// chosen by AIC up to Schwert's bound, on a common estimation sample.
pub fn adf_test(series: &[f64], spec: AdfSpec, max_lag: Option<usize>) -> Result<AdfResult> {
    let n = series.len();
    if n < 20 {
        return Err(Error::TooShort { needed: 20, got: n });
    }
    let params = match spec {
        AdfSpec::None => 1,
        AdfSpec::Constant => 2,
        AdfSpec::ConstantTrend => 3,
    };
    let (k_max, fixed) = match max_lag {
        Some(k) => (k, true),
        None => (schwert_max_lag(n), false),
    };
    // leave room for a few residual degrees of freedom
    let k_max = k_max.min(n.saturating_sub(params + 5) / 2);

    let lags = if fixed {
        k_max
    } else {
        let mut best = (0usize, f64::INFINITY);
        for k in 0..=k_max {
            if let Some(r) = regress(series, spec, k, k_max + 1) {
                let nf = r.nobs as f64;
                let aic = nf * (r.sse / nf).ln() + 2.0 * r.nparams as f64;
                if aic < best.1 {
                    best = (k, aic);
                }
            }
        }
        best.0
    };

    let reg = regress(series, spec, lags, 0).ok_or_else(|| {
        Error::InvalidArgument("ADF regression is singular (series may be constant)".into())
    })?;
    let critical_values = critical_values(spec, reg.nobs);
    let reject_at = if reg.stat < critical_values.one {
        Some(Significance::One)
    } else if reg.stat < critical_values.five {
        Some(Significance::Five)
    } else if reg.stat < critical_values.ten {
        Some(Significance::Ten)
    } else {
        None
    };
    Ok(AdfResult {
        statistic: reg.stat,
        spec,
        lags_used: lags,
        nobs: reg.nobs,
        critical_values,
        reject_at,
    })
}
