//! Conditional-sum-of-squares ARMA estimation and AIC order search.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::acf::{acf, durbin_levinson};
use super::diff::difference;
use super::ols::ols;
use super::optim::{nelder_mead, NmOptions};
use super::{ArimaModel, ArimaOrder};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

const MAX_D: usize = 2;
const ROOT_MARGIN: f64 = 1e-7;
const STARTS: usize = 5;
/// Order selection discards fits with an AR or MA root of modulus below this.
pub const NEAR_UNIT_ROOT: f64 = 1.01;

/// Step-down Levinson test: true when `1 - sum phi_i z^i` has all roots outside the unit circle.
pub fn ar_is_stationary(phi: &[f64]) -> bool {
    let mut a = phi.to_vec();
    for k in (1..=a.len()).rev() {
        let kappa = a[k - 1];
        if !(kappa.abs() < 1.0 - ROOT_MARGIN) {
            return false;
        }
        let denom = 1.0 - kappa * kappa;
        let prev = a.clone();
        for j in 1..k {
            a[j - 1] = (prev[j - 1] + kappa * prev[k - j - 1]) / denom;
        }
        a.truncate(k - 1);
    }
    true
}

/// True when `1 + sum theta_j z^j` has all roots outside the unit circle.
pub fn ma_is_invertible(theta: &[f64]) -> bool {
    let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
    ar_is_stationary(&neg)
}

/// Largest modulus of the inverse roots of `1 - sum c_i z^i` (companion eigenvalues).
pub fn max_inverse_root(c: &[f64]) -> f64 {
    let p = c.len();
    if p == 0 {
        return 0.0;
    }
    let mut m = nalgebra::DMatrix::<f64>::zeros(p, p);
    for (j, v) in c.iter().enumerate() {
        m[(0, j)] = *v;
    }
    for i in 1..p {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// True when an AR or MA root lies within [`NEAR_UNIT_ROOT`] of the origin.
pub fn has_near_unit_root(model: &ArimaModel) -> bool {
    let neg_ma: Vec<f64> = model.ma_coeffs.iter().map(|t| -t).collect();
    let limit = 1.0 / NEAR_UNIT_ROOT;
    max_inverse_root(&model.ar_coeffs) > limit || max_inverse_root(&neg_ma) > limit
}

/// Innovations `u_t` for `t >= start`, with pre-sample innovations fixed at zero.
pub(crate) fn css_innovations(
    w: &[f64],
    intercept: f64,
    ar: &[f64],
    ma: &[f64],
    start: usize,
) -> Vec<f64> {
    let mut u = vec![0.0; w.len()];
    for t in start..w.len() {
        let mut e = w[t] - intercept;
        for (i, phi) in ar.iter().enumerate() {
            e -= phi * w[t - 1 - i];
        }
        for (j, theta) in ma.iter().enumerate() {
            if t > j && t - 1 - j >= start {
                e -= theta * u[t - 1 - j];
            }
        }
        u[t] = e;
    }
    u.split_off(start)
}

fn sse(v: &[f64]) -> f64 {
    v.iter().map(|e| e * e).sum()
}

struct Layout {
    p: usize,
    q: usize,
}

impl Layout {
    fn split<'a>(&self, x: &'a [f64]) -> (f64, &'a [f64], &'a [f64]) {
        (x[0], &x[1..1 + self.p], &x[1 + self.p..1 + self.p + self.q])
    }

    fn admissible(&self, x: &[f64]) -> bool {
        let (_, ar, ma) = self.split(x);
        ar_is_stationary(ar) && ma_is_invertible(ma)
    }
}

/// Start values from a long-AR / OLS (Hannan-Rissanen) regression.
fn hannan_rissanen(w: &[f64], p: usize, q: usize, start: usize) -> Option<Vec<f64>> {
    let n = w.len();
    let h = ((n as f64).ln().ceil() as usize)
        .max(p + q)
        .min(n / 4)
        .max(1);
    let resid: Vec<f64> = if q > 0 {
        let rho = acf(w, h).ok()?;
        let (_, phi_long) = durbin_levinson(&rho);
        let mean = w.iter().sum::<f64>() / n as f64;
        (0..n)
            .map(|t| {
                if t < h {
                    0.0
                } else {
                    let pred: f64 = phi_long
                        .iter()
                        .enumerate()
                        .map(|(i, f)| f * (w[t - 1 - i] - mean))
                        .sum();
                    w[t] - mean - pred
                }
            })
            .collect()
    } else {
        vec![0.0; n]
    };
    let first = if q > 0 { start.max(h + q) } else { start };
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for t in first.max(p)..n {
        let mut row = vec![1.0];
        row.extend((1..=p).map(|i| w[t - i]));
        row.extend((1..=q).map(|j| resid[t - j]));
        rows.push(row);
        y.push(w[t]);
    }
    if rows.len() <= 1 + p + q {
        return None;
    }
    ols(&rows, &y).map(|f| f.coeffs)
}

/// Pulls a start point inside the admissible region by shrinking coefficients.
fn shrink_to_admissible(layout: &Layout, mut x: Vec<f64>) -> Vec<f64> {
    for _ in 0..60 {
        if layout.admissible(&x) {
            return x;
        }
        for v in x.iter_mut().skip(1) {
            *v *= 0.9;
        }
    }
    for v in x.iter_mut().skip(1) {
        *v = 0.0;
    }
    x
}

/// CSS fit of an ARMA(p, q) with intercept on the (already differenced) `w`,
/// conditioning on observations before `start`.
pub(crate) fn fit_css(
    w: &[f64],
    order: ArimaOrder,
    start: usize,
    seed: u64,
) -> Result<(Vec<f64>, f64)> {
    let ArimaOrder { p, d, q } = order;
    let fail = |reason: &str| Error::Estimation {
        p,
        d,
        q,
        reason: reason.to_string(),
    };
    let window = &w[start..];
    let mean = window.iter().sum::<f64>() / window.len() as f64;
    let null_sse: f64 = window.iter().map(|v| (v - mean) * (v - mean)).sum();
    if p + q == 0 {
        return Ok((vec![mean], null_sse));
    }

    let layout = Layout { p, q };
    let objective = |x: &[f64]| {
        if !layout.admissible(x) {
            return f64::INFINITY;
        }
        let (c, ar, ma) = layout.split(x);
        let s = sse(&css_innovations(w, c, ar, ma, start));
        if s.is_finite() {
            s
        } else {
            f64::INFINITY
        }
    };

    let dim = 1 + p + q;
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(STARTS);
    let mut null = vec![0.0; dim];
    null[0] = mean;
    starts.push(null);
    if p > 0 {
        if let Ok(rho) = acf(w, p) {
            let (_, phi) = durbin_levinson(&rho);
            let mut x = vec![0.0; dim];
            x[0] = mean * (1.0 - phi.iter().sum::<f64>());
            x[1..1 + p].copy_from_slice(&phi);
            starts.push(shrink_to_admissible(&layout, x));
        }
    }
    if let Some(hr) = hannan_rissanen(w, p, q, start) {
        starts.push(shrink_to_admissible(&layout, hr));
    }
    let anchor = starts
        .iter()
        .min_by(|a, b| objective(a).total_cmp(&objective(b)))
        .cloned()
        .expect("null start always present");
    let mut rng = stream_rng(seed, (p * 31 + q) as u64);
    while starts.len() < STARTS {
        let mut x = anchor.clone();
        for v in x.iter_mut().skip(1) {
            *v += rng.random_range(-0.3..0.3);
        }
        starts.push(shrink_to_admissible(&layout, x));
    }

    let scale = {
        let var = null_sse / window.len() as f64;
        var.sqrt().max(1e-8)
    };
    let mut step = vec![0.1; dim];
    step[0] = 0.1 * scale;
    let opts = NmOptions {
        step,
        max_evals: 600 * dim,
        ftol: 1e-13,
        xtol: 1e-10,
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in &starts {
        let r = nelder_mead(objective, s, &opts);
        if best.as_ref().is_none_or(|(_, f)| r.fx < *f) {
            best = Some((r.x, r.fx));
        }
    }
    let (mut x, mut fx) = best.expect("at least one start");
    // restart from the incumbent until it stops improving
    for _ in 0..3 {
        let r = nelder_mead(objective, &x, &opts);
        if r.fx < fx {
            let gain = fx - r.fx;
            x = r.x;
            fx = r.fx;
            if gain <= 1e-12 * (1.0 + fx) {
                break;
            }
        } else {
            break;
        }
    }

    if !fx.is_finite() {
        return Err(fail("no admissible parameter vector found"));
    }
    if fx > null_sse * (1.0 + 1e-9) + 1e-300 {
        return Err(fail("optimizer did not improve on the white-noise model"));
    }
    Ok((x, fx))
}

pub(crate) fn validate_order(order: ArimaOrder) -> Result<()> {
    if order.d > MAX_D {
        return Err(Error::InvalidArgument(format!(
            "differencing order {} exceeds {MAX_D}",
            order.d
        )));
    }
    Ok(())
}

fn min_effective(order: ArimaOrder) -> usize {
    5 * (order.p + order.q + 1)
}

/// Estimates an ARIMA model by conditional sum of squares.
pub fn estimate_arma(series: &[f64], order: ArimaOrder) -> Result<ArimaModel> {
    estimate_conditioned(series, order, order.p)
}

/// Like [`estimate_arma`] but conditions on the first `start >= p` differenced values.
pub fn estimate_conditioned(series: &[f64], order: ArimaOrder, start: usize) -> Result<ArimaModel> {
    validate_order(order)?;
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries(
            "series contains non-finite values".into(),
        ));
    }
    let start = start.max(order.p);
    let w = difference(series, order.d)?;
    let needed = min_effective(order);
    if w.len() < start + needed {
        return Err(Error::TooShort {
            needed: start + needed + order.d,
            got: series.len(),
        });
    }
    let (x, fx) = fit_css(&w, order, start, 0xA21A)?;
    let (p, q) = (order.p, order.q);
    let intercept = x[0];
    let ar_coeffs = x[1..1 + p].to_vec();
    let ma_coeffs = x[1 + p..1 + p + q].to_vec();
    let residuals = css_innovations(&w, intercept, &ar_coeffs, &ma_coeffs, start);
    let n_obs = residuals.len();
    let sse = sse(&residuals);
    debug_assert!((sse - fx).abs() <= 1e-9 * (1.0 + fx));
    Ok(ArimaModel {
        order,
        intercept,
        ar_coeffs,
        ma_coeffs,
        sigma2: (sse / n_obs as f64).max(f64::MIN_POSITIVE),
        sse,
        residuals,
        n_obs,
        conditioning: start,
        history: series.to_vec(),
    })
}

/// Gaussian AIC `n ln(SSE/n) + 2 (p + q + 1 + 1)`; the intercept is always estimated.
pub fn aic(model: &ArimaModel) -> f64 {
    let n = model.n_obs as f64;
    n * model.sigma2.ln() + 2.0 * (model.order.p + model.order.q + 2) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub p: usize,
    pub q: usize,
    pub aic: Option<f64>,
    pub sse: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSelection {
    pub order: ArimaOrder,
    pub model: ArimaModel,
    pub table: Vec<ScanEntry>,
}

/// Fits every `(p, q)` on a common conditioning sample and keeps the AIC minimum.
/// Ties go to the smaller `p + q`, then the smaller `p`. Fits with a root near the
/// unit circle sit on the boundary of the admissible region and are not eligible.
pub fn select_order(
    series: &[f64],
    p_max: usize,
    q_max: usize,
    d: usize,
) -> Result<OrderSelection> {
    validate_order(ArimaOrder { p: 0, d, q: 0 })?;
    let w_len = series.len().saturating_sub(d);
    let feasible_p = (0..=p_max)
        .rev()
        .find(|&p| w_len >= p + min_effective(ArimaOrder { p, d, q: 0 }))
        .ok_or(Error::NoConvergedOrder)?;
    let start = feasible_p;

    let grid: Vec<(usize, usize)> = (0..=p_max)
        .flat_map(|p| (0..=q_max).map(move |q| (p, q)))
        .collect();
    let fits: Vec<(usize, usize, Result<ArimaModel>)> = grid
        .par_iter()
        .map(|&(p, q)| {
            (
                p,
                q,
                estimate_conditioned(series, ArimaOrder { p, d, q }, start),
            )
        })
        .collect();

    let mut table = Vec::with_capacity(fits.len());
    let mut best: Option<(f64, usize, usize)> = None;
    let mut scanned = Vec::with_capacity(fits.len());
    for (p, q, fit) in fits {
        match fit {
            Ok(m) if has_near_unit_root(&m) => table.push(ScanEntry {
                p,
                q,
                aic: Some(aic(&m)),
                sse: Some(m.sse),
                error: Some(format!("root within {NEAR_UNIT_ROOT} of the unit circle")),
            }),
            Ok(m) => {
                let a = aic(&m);
                let better = match best {
                    None => true,
                    Some((ba, bp, bq)) => a < ba || (a == ba && ((p + q, p) < (bp + bq, bp))),
                };
                if better && a.is_finite() {
                    best = Some((a, p, q));
                }
                scanned.push(((p, q), m.clone()));
                table.push(ScanEntry {
                    p,
                    q,
                    aic: Some(a),
                    sse: Some(m.sse),
                    error: None,
                });
            }
            Err(e) => table.push(ScanEntry {
                p,
                q,
                aic: None,
                sse: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let (_, p, q) = best.ok_or(Error::NoConvergedOrder)?;
    let order = ArimaOrder { p, d, q };
    // the full-sample refit can drift onto the boundary the scan excluded; keep the scanned fit then
    let model = match estimate_arma(series, order) {
        Ok(m) if !has_near_unit_root(&m) => m,
        _ => scanned
            .into_iter()
            .find(|(k, _)| *k == (p, q))
            .map(|(_, m)| m)
            .ok_or(Error::NoConvergedOrder)?,
    };
    Ok(OrderSelection {
        order,
        model,
        table,
    })
}
