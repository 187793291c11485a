use crate::error::{Error, Result};

/// Sample autocorrelations `acf[0..=max_lag]` using the biased covariance estimator.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if n < max_lag + 2 {
        return Err(Error::TooShort {
            needed: max_lag + 2,
            got: n,
        });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let c0: f64 = centred.iter().map(|x| x * x).sum();
    let floor = 1e-12 * mean.abs().max(1.0);
    if c0 / n as f64 <= floor * floor {
        return Err(Error::ZeroVariance);
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                centred[k..]
                    .iter()
                    .zip(&centred)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / c0
            }
        })
        .collect())
}

/// Durbin-Levinson recursion on autocorrelations `rho[0..=p]`.
///
/// Returns the partial autocorrelations `pacf[1..=p]` and the order-`p` AR coefficients.
pub(crate) fn durbin_levinson(rho: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = rho.len() - 1;
    let mut phi = vec![0.0; p];
    let mut pacf = Vec::with_capacity(p);
    let mut v = 1.0;
    for k in 1..=p {
        let num = rho[k] - (1..k).map(|j| phi[j - 1] * rho[k - j]).sum::<f64>();
        let kappa = if v > 0.0 { num / v } else { 0.0 };
        let prev = phi.clone();
        phi[k - 1] = kappa;
        for j in 1..k {
            phi[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
        }
        v *= 1.0 - kappa * kappa;
        pacf.push(kappa);
    }
    (pacf, phi)
}

/// Partial autocorrelations for lags `1..=max_lag`.
pub fn pacf(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let rho = acf(series, max_lag)?;
    Ok(durbin_levinson(&rho).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_zero_is_one() {
        let r = acf(&[1.0, 3.0, 2.0, 5.0, 4.0], 2).unwrap();
        assert_eq!(r[0], 1.0);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn constant_series_is_an_error() {
        assert!(matches!(acf(&[2.0; 10], 3), Err(Error::ZeroVariance)));
        assert!(acf(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn pacf_of_ar1_acf_cuts_off() {
        let rho: Vec<f64> = (0..5).map(|k| 0.6f64.powi(k)).collect();
        let (pacf, phi) = durbin_levinson(&rho);
        assert!((pacf[0] - 0.6).abs() < 1e-12);
        for &p in &pacf[1..] {
            assert!(p.abs() < 1e-12);
        }
        assert!((phi[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn first_pacf_equals_first_acf() {
        let x = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0, 3.0, 6.0];
        let r = acf(&x, 3).unwrap();
        let p = pacf(&x, 3).unwrap();
        assert!((r[1] - p[0]).abs() < 1e-15);
    }
}
