//! Epsilon-insensitive support vector regression with an RBF kernel.
//!
//! Training happens in min-max scaled space for both inputs and targets; the
//! tube half-width `epsilon` is therefore measured in scaled target units.

mod kernel;
pub mod smo;

use serde::{Deserialize, Serialize};

pub use kernel::{rbf_kernel, KernelMatrix};
pub use smo::{solve_dual, DualSolution};

use crate::error::{Error, Result};
use crate::timeseries::ScalingState;

pub const DEFAULT_TOL: f64 = 1e-3;

/// Penalty `C`, tube half-width `epsilon` and RBF width `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvrParams {
    pub c_penalty: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

impl SvrParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_penalty > 0.0 && self.c_penalty.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "C must be positive, got {}",
                self.c_penalty
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be >= 0, got {}",
                self.epsilon
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// How regressors are built from the granule sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    /// Lags of the target sequence only.
    #[default]
    Lagged,
    /// Lags of all three Min/Mean/Max sequences jointly.
    Cross,
}

/// Lag-embedded regression pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupervisedSet {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub lag: usize,
}

impl SupervisedSet {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    pub fn subset(&self, idx: &[usize]) -> SupervisedSet {
        SupervisedSet {
            inputs: idx.iter().map(|&i| self.inputs[i].clone()).collect(),
            targets: idx.iter().map(|&i| self.targets[i]).collect(),
            lag: self.lag,
        }
    }
}

/// Regressor for position `t`: `lag` previous values of each source, oldest first.
pub fn lag_features(sources: &[&[f64]], t: usize, lag: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(sources.len() * lag);
    for src in sources {
        x.extend_from_slice(&src[t - lag..t]);
    }
    x
}

/// Pairs `([v[t-lag], .., v[t-1]], v[t])` for `t = lag .. len-1`.
pub fn make_supervised(sequence: &[f64], lag: usize) -> Result<SupervisedSet> {
    make_supervised_multi(&[sequence], sequence, lag)
}

/// Like [`make_supervised`] but regressors concatenate lags of every source.
pub fn make_supervised_multi(
    sources: &[&[f64]],
    target: &[f64],
    lag: usize,
) -> Result<SupervisedSet> {
    if lag < 1 {
        return Err(Error::InvalidArgument("lag must be at least 1".into()));
    }
    if sources.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one feature source is required".into(),
        ));
    }
    if let Some(s) = sources.iter().find(|s| s.len() != target.len()) {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            got: s.len(),
        });
    }
    if target.len() <= lag {
        return Err(Error::TooShort {
            needed: lag + 1,
            got: target.len(),
        });
    }
    let inputs = (lag..target.len())
        .map(|t| lag_features(sources, t, lag))
        .collect();
    Ok(SupervisedSet {
        inputs,
        targets: target[lag..].to_vec(),
        lag,
    })
}

/// A trained epsilon-SVR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    /// Support vectors in scaled input space.
    pub support_inputs: Vec<Vec<f64>>,
    pub dual_coeffs: Vec<f64>,
    pub bias: f64,
    pub params: SvrParams,
    pub input_scaling: ScalingState,
    pub target_scaling: ScalingState,
    pub dim: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl SvrModel {
    /// Decision value `sum beta_i k(x, x_i) + b` for an already-scaled input.
    pub fn decision_scaled(&self, z: &[f64]) -> f64 {
        let mut f = self.bias;
        for (sv, beta) in self.support_inputs.iter().zip(&self.dual_coeffs) {
            f += beta * kernel::rbf_unchecked(z, sv, self.params.gamma);
        }
        f
    }

    pub fn scale_input(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.input_scaling.apply(v)).collect()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self
            .target_scaling
            .invert(self.decision_scaled(&self.scale_input(x))))
    }
}

pub fn predict(model: &SvrModel, x: &[f64]) -> Result<f64> {
    model.predict(x)
}

pub fn default_max_iter(n: usize) -> usize {
    10 * n.max(1) * 1000
}

/// Trains on `data`, fitting input and target scaling from it.
pub fn train_svr(
    data: &SupervisedSet,
    params: SvrParams,
    tol: f64,
    max_iter: usize,
) -> Result<SvrModel> {
    if data.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot train on an empty set".into(),
        ));
    }
    let flat: Vec<f64> = data.inputs.iter().flatten().copied().collect();
    let input_scaling = ScalingState::fit(&flat)?;
    let target_scaling = ScalingState::fit(&data.targets)?;
    train_svr_scaled(data, params, input_scaling, target_scaling, tol, max_iter)
}

/// Trains with caller-supplied scaling (used by cross-validation so every fold
/// shares one coordinate system).
pub fn train_svr_scaled(
    data: &SupervisedSet,
    params: SvrParams,
    input_scaling: ScalingState,
    target_scaling: ScalingState,
    tol: f64,
    max_iter: usize,
) -> Result<SvrModel> {
    let (model, _) = fit_dual(
        data,
        params,
        input_scaling,
        target_scaling,
        tol,
        max_iter,
        None,
    )?;
    Ok(model)
}

/// Full training path that also returns every dual coefficient and, optionally,
/// the per-iteration objective trace.
pub fn fit_dual(
    data: &SupervisedSet,
    params: SvrParams,
    input_scaling: ScalingState,
    target_scaling: ScalingState,
    tol: f64,
    max_iter: usize,
    trace: Option<&mut Vec<f64>>,
) -> Result<(SvrModel, DualSolution)> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if data.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot train on an empty set".into(),
        ));
    }
    let dim = data.dim();
    if let Some(bad) = data.inputs.iter().find(|x| x.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    if data.inputs.len() != data.targets.len() {
        return Err(Error::DimensionMismatch {
            expected: data.targets.len(),
            got: data.inputs.len(),
        });
    }

    let z: Vec<Vec<f64>> = data
        .inputs
        .iter()
        .map(|x| x.iter().map(|&v| input_scaling.apply(v)).collect())
        .collect();
    let y: Vec<f64> = data
        .targets
        .iter()
        .map(|&v| target_scaling.apply(v))
        .collect();
    let k = KernelMatrix::rbf(&z, params.gamma);
    let sol = solve_dual(
        &k,
        &y,
        params.c_penalty,
        params.epsilon,
        tol,
        max_iter,
        trace,
    );

    let mut support_inputs = Vec::new();
    let mut dual_coeffs = Vec::new();
    for (zi, &b) in z.iter().zip(&sol.beta) {
        if b != 0.0 {
            support_inputs.push(zi.clone());
            dual_coeffs.push(b);
        }
    }
    let model = SvrModel {
        support_inputs,
        dual_coeffs,
        bias: sol.bias,
        params,
        input_scaling,
        target_scaling,
        dim,
        converged: sol.converged,
        iterations: sol.iterations,
    };
    Ok((model, sol))
}
