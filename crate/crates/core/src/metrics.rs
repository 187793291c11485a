//! Point-forecast accuracy statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsBundle {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    /// Mean absolute percentage error, in percent.
    pub mape_percent: f64,
}

pub fn evaluate(predictions: &[f64], observations: &[f64]) -> Result<MetricsBundle> {
    if predictions.len() != observations.len() {
        return Err(Error::DimensionMismatch {
            expected: observations.len(),
            got: predictions.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot evaluate empty forecasts".into(),
        ));
    }
    if observations.contains(&0.0) {
        return Err(Error::InvalidArgument(
            "MAPE is undefined for a zero observation".into(),
        ));
    }
    let n = predictions.len() as f64;
    let (mut se, mut ae, mut ape) = (0.0, 0.0, 0.0);
    for (p, o) in predictions.iter().zip(observations) {
        let e = p - o;
        se += e * e;
        ae += e.abs();
        ape += (e / o).abs();
    }
    let mse = se / n;
    Ok(MetricsBundle {
        mse,
        rmse: mse.sqrt(),
        mae: ae / n,
        mape_percent: 100.0 * ape / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_inputs_are_zero() {
        let m = evaluate(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!((m.mse, m.rmse, m.mae, m.mape_percent), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn single_pair() {
        let m = evaluate(&[3.0], &[1.0]).unwrap();
        assert_eq!(
            (m.mse, m.rmse, m.mae, m.mape_percent),
            (4.0, 2.0, 2.0, 200.0)
        );
    }

    #[test]
    fn errors() {
        assert!(evaluate(&[1.0], &[1.0, 2.0]).is_err());
        assert!(evaluate(&[], &[]).is_err());
        assert!(evaluate(&[1.0], &[0.0]).is_err());
    }

    proptest! {
        #[test]
        fn scale_equivariance(pairs in prop::collection::vec((1.0f64..100.0, 1.0f64..100.0), 1..20), c in 0.01f64..50.0) {
            let (p, o): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let base = evaluate(&p, &o).unwrap();
            let ps: Vec<f64> = p.iter().map(|v| v * c).collect();
            let os: Vec<f64> = o.iter().map(|v| v * c).collect();
            let s = evaluate(&ps, &os).unwrap();
            prop_assert!((s.mse - c * c * base.mse).abs() <= 1e-9 * (1.0 + s.mse));
            prop_assert!((s.rmse - c * base.rmse).abs() <= 1e-9 * (1.0 + s.rmse));
            prop_assert!((s.mae - c * base.mae).abs() <= 1e-9 * (1.0 + s.mae));
            prop_assert!((s.mape_percent - base.mape_percent).abs() <= 1e-9 * (1.0 + s.mape_percent));
            prop_assert!((base.rmse * base.rmse - base.mse).abs() <= 1e-10 * (1.0 + base.mse));
        }
    }
}
