use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::acf::acf;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxLag {
    pub lag: usize,
    pub q_stat: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxResult {
    pub lags: Vec<LjungBoxLag>,
}

impl LjungBoxResult {
    pub fn at(&self, lag: usize) -> Option<&LjungBoxLag> {
        self.lags.iter().find(|l| l.lag == lag)
    }
}

/// Ljung-Box portmanteau statistics for lags `1..=max_lag`.
///
/// Degrees of freedom are `max(k - fitted_param_count, 1)`.
pub fn ljung_box(
    residuals: &[f64],
    max_lag: usize,
    fitted_param_count: usize,
) -> Result<LjungBoxResult> {
    let rho = acf(residuals, max_lag)?;
    let n = residuals.len() as f64;
    let mut acc = 0.0;
    let mut lags = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        acc += rho[k] * rho[k] / (n - k as f64);
        let q_stat = n * (n + 2.0) * acc;
        let df = k.saturating_sub(fitted_param_count).max(1);
        let chi = ChiSquared::new(df as f64).expect("positive degrees of freedom");
        let p_value = chi.sf(q_stat).clamp(0.0, 1.0);
        lags.push(LjungBoxLag {
            lag: k,
            q_stat,
            df,
            p_value,
        });
    }
    Ok(LjungBoxResult { lags })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_small_case() {
        let x = [1.0, -1.0, 2.0, 0.0, -2.0, 1.0];
        let r = ljung_box(&x, 2, 0).unwrap();
        let rho = acf(&x, 2).unwrap();
        let n = 6.0;
        let q1 = n * (n + 2.0) * rho[1] * rho[1] / (n - 1.0);
        assert!((r.lags[0].q_stat - q1).abs() < 1e-12);
        assert!(r.lags[1].q_stat >= r.lags[0].q_stat);
        assert!(r.lags.iter().all(|l| (0.0..=1.0).contains(&l.p_value)));
    }

    #[test]
    fn degrees_of_freedom_floor_at_one() {
        let x: Vec<f64> = (0..30).map(|i| ((i * 7) % 11) as f64).collect();
        let r = ljung_box(&x, 4, 3).unwrap();
        let dfs: Vec<usize> = r.lags.iter().map(|l| l.df).collect();
        assert_eq!(dfs, vec![1, 1, 1, 1]);
    }

    #[test]
    fn constant_residuals_error() {
        assert!(ljung_box(&[0.5; 20], 5, 0).is_err());
    }
}
