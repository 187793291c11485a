//! General regression neural network: Nadaraya-Watson smoothing with a shared
//! Gaussian smooth factor, plus leave-one-out grid search for that factor.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrnnModel {
    train_inputs: Vec<Vec<f64>>,
    train_targets: Vec<f64>,
    sigma: f64,
}

/// Canonical ordering of training samples so predictions do not depend on input order.
fn sample_cmp(a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.0.len().cmp(&b.0.len()).then(a.1.total_cmp(&b.1))
}

impl GrnnModel {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>, sigma: f64) -> Result<Self> {
        if inputs.is_empty() || inputs.len() != targets.len() {
            return Err(Error::InvalidArgument(format!(
                "GRNN needs matching non-empty inputs and targets, got {} and {}",
                inputs.len(),
                targets.len()
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "smooth factor must be positive, got {sigma}"
            )));
        }
        let dim = inputs[0].len();
        if let Some(bad) = inputs.iter().find(|x| x.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        let mut samples: Vec<(Vec<f64>, f64)> = inputs.into_iter().zip(targets).collect();
        samples.sort_by(sample_cmp);
        let (train_inputs, train_targets) = samples.into_iter().unzip();
        Ok(Self {
            train_inputs,
            train_targets,
            sigma,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.train_inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.train_targets
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let dim = self.train_inputs[0].len();
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        let denom = 2.0 * self.sigma * self.sigma;
        let mut num = 0.0;
        let mut den = 0.0;
        let mut nearest = (f64::INFINITY, 0usize);
        for (j, (xj, tj)) in self
            .train_inputs
            .iter()
            .zip(&self.train_targets)
            .enumerate()
        {
            let d2: f64 = x.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < nearest.0 {
                nearest = (d2, j);
            }
            let w = (-d2 / denom).exp();
            num += w * tj;
            den += w;
        }
        if den > 0.0 {
            Ok(num / den)
        } else {
            Ok(self.train_targets[nearest.1])
        }
    }
}

pub fn grnn_predict(model: &GrnnModel, x: &[f64]) -> Result<f64> {
    model.predict(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaSearchResult {
    pub best_sigma: f64,
    pub curve: Vec<(f64, f64)>,
}

/// Consecutive LOOCV increases after which the grid scan stops.
pub const EARLY_STOP_RUN: usize = 5;

/// Leave-one-out MSE of a GRNN with smooth factor `sigma`.
pub fn loocv_mse(inputs: &[Vec<f64>], targets: &[f64], sigma: f64) -> Result<f64> {
    let n = inputs.len();
    let mut sse = 0.0;
    for i in 0..n {
        let (rest_x, rest_t): (Vec<Vec<f64>>, Vec<f64>) = (0..n)
            .filter(|&j| j != i)
            .map(|j| (inputs[j].clone(), targets[j]))
            .unzip();
        let model = GrnnModel::new(rest_x, rest_t, sigma)?;
        let e = model.predict(&inputs[i])? - targets[i];
        sse += e * e;
    }
    Ok(sse / n as f64)
}

/// Scans `sigma_start, sigma_start + step, ..` up to `sigma_max`, stopping early
/// after [`EARLY_STOP_RUN`] consecutive increases; ties go to the smaller sigma.
pub fn select_sigma(
    inputs: &[Vec<f64>],
    targets: &[f64],
    sigma_start: f64,
    step: f64,
    sigma_max: f64,
) -> Result<SigmaSearchResult> {
    if inputs.len() < 2 || inputs.len() != targets.len() {
        return Err(Error::InvalidArgument(
            "sigma search needs at least 2 matching samples".into(),
        ));
    }
    if !(sigma_start > 0.0) || !(step > 0.0) {
        return Err(Error::InvalidArgument(
            "sigma_start and step must be positive".into(),
        ));
    }
    if sigma_start > sigma_max * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument("sigma grid is empty".into()));
    }
    let mut curve: Vec<(f64, f64)> = Vec::new();
    let mut rises = 0usize;
    for i in 0.. {
        let sigma = sigma_start + i as f64 * step;
        if sigma > sigma_max * (1.0 + 1e-12) {
            break;
        }
        let mse = loocv_mse(inputs, targets, sigma)?;
        if let Some(&(_, prev)) = curve.last() {
            rises = if mse > prev { rises + 1 } else { 0 };
        }
        curve.push((sigma, mse));
        if rises >= EARLY_STOP_RUN {
            break;
        }
    }
    let best_sigma = curve
        .iter()
        .fold((f64::NAN, f64::INFINITY), |(bs, bm), &(s, m)| {
            if m < bm {
                (s, m)
            } else {
                (bs, bm)
            }
        })
        .0;
    let best_sigma = if best_sigma.is_nan() {
        curve[0].0
    } else {
        best_sigma
    };
    Ok(SigmaSearchResult { best_sigma, curve })
}
