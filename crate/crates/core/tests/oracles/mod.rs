//! Independent reference implementations used by the integration and acceptance tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

pub fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

pub fn gram(x: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    x.iter()
        .map(|a| x.iter().map(|b| rbf(a, b, gamma)).collect())
        .collect()
}

/// `D(beta) = -1/2 beta'K beta + y'beta - eps sum|beta|`
pub fn dual_objective(k: &[Vec<f64>], y: &[f64], eps: f64, beta: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += beta[i] * k[i][j] * beta[j];
        }
    }
    let lin: f64 = (0..n).map(|i| y[i] * beta[i] - eps * beta[i].abs()).sum();
    -0.5 * quad + lin
}

#[derive(Debug, Clone)]
pub struct QpOracle {
    pub beta: Vec<f64>,
    pub objective: f64,
    /// Bias, or the admissible interval when no coefficient is strictly inside its box.
    pub bias: Result<f64, (f64, f64)>,
}

/// Exact epsilon-SVR dual by enumerating every active-set pattern.
///
/// Each coefficient is at `-C`, `0`, `+C`, or free with a fixed sign. For a
/// pattern the free coefficients and the bias solve the stationarity system
/// `K_FF beta_F + b 1 = y_F - eps sign_F - K_FB beta_B`, `1'beta = 0`; feasible
/// candidates are scored and the best one is returned. Cost is `5^n`.
pub fn svr_qp_oracle(k: &[Vec<f64>], y: &[f64], c: f64, eps: f64) -> QpOracle {
    let n = y.len();
    assert!(n <= 8, "enumeration oracle is exponential");
    let total = 5usize.pow(n as u32);
    let mut best: Option<(f64, Vec<f64>, Option<f64>)> = None;
    let slack = 1e-10 * c.max(1.0);

    for code in 0..total {
        // state: 0 -> -C, 1 -> free negative, 2 -> zero, 3 -> free positive, 4 -> +C
        let mut states = vec![0u8; n];
        let mut r = code;
        for s in states.iter_mut() {
            *s = (r % 5) as u8;
            r /= 5;
        }
        let free: Vec<usize> = (0..n)
            .filter(|&i| states[i] == 1 || states[i] == 3)
            .collect();
        let mut beta = vec![0.0; n];
        for i in 0..n {
            beta[i] = match states[i] {
                0 => -c,
                4 => c,
                _ => 0.0,
            };
        }
        let bound_sum: f64 = beta.iter().sum();
        let mut bias = None;
        if free.is_empty() {
            if bound_sum.abs() > slack {
                continue;
            }
        } else {
            let m = free.len();
            let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
            let mut rhs = DVector::<f64>::zeros(m + 1);
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[(r, s)] = k[i][j];
                }
                a[(r, m)] = 1.0;
                a[(m, r)] = 1.0;
                let sign = if states[i] == 3 { 1.0 } else { -1.0 };
                let fixed: f64 = (0..n).map(|j| k[i][j] * beta[j]).sum();
                rhs[r] = y[i] - eps * sign - fixed;
            }
            rhs[m] = -bound_sum;
            let Some(sol) = a.lu().solve(&rhs) else {
                continue;
            };
            let mut ok = true;
            for (r, &i) in free.iter().enumerate() {
                let v = sol[r];
                let inside = if states[i] == 3 {
                    v >= -slack && v <= c + slack
                } else {
                    v <= slack && v >= -c - slack
                };
                if !inside {
                    ok = false;
                    break;
                }
                beta[i] = v.clamp(-c, c);
            }
            if !ok {
                continue;
            }
            bias = Some(sol[m]);
        }
        let obj = dual_objective(k, y, eps, &beta);
        if best.as_ref().is_none_or(|(b, _, _)| obj > *b) {
            best = Some((obj, beta, bias));
        }
    }

    let (objective, beta, bias) = best.expect("beta = 0 is always feasible");
    let bias = match bias {
        Some(b) if beta.iter().any(|v| v.abs() > 1e-9 && (c - v.abs()) > 1e-9) => Ok(b),
        _ => Err(bias_interval(k, y, c, eps, &beta)),
    };
    QpOracle {
        beta,
        objective,
        bias,
    }
}

/// Bias values compatible with the KKT conditions for a fixed `beta`.
pub fn bias_interval(k: &[Vec<f64>], y: &[f64], c: f64, eps: f64, beta: &[f64]) -> (f64, f64) {
    let n = y.len();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        let r = y[i] - (0..n).map(|j| k[i][j] * beta[j]).sum::<f64>();
        let tol = 1e-9 * c.max(1.0);
        if beta[i].abs() <= tol {
            lo = lo.max(r - eps);
            hi = hi.min(r + eps);
        } else if beta[i] >= c - tol {
            hi = hi.min(r - eps);
        } else if beta[i] <= -c + tol {
            lo = lo.max(r + eps);
        } else {
            let s = beta[i].signum();
            lo = lo.max(r - eps * s);
            hi = hi.min(r - eps * s);
        }
    }
    (lo, hi)
}

/// Largest violation of the epsilon-SVR KKT conditions by `(beta, b)`.
pub fn kkt_violation(k: &[Vec<f64>], y: &[f64], c: f64, eps: f64, beta: &[f64], b: f64) -> f64 {
    let n = y.len();
    let tol = 1e-8 * c.max(1.0);
    let mut worst = beta.iter().sum::<f64>().abs();
    for i in 0..n {
        let f = (0..n).map(|j| k[i][j] * beta[j]).sum::<f64>() + b;
        let e = y[i] - f;
        let v = if beta[i].abs() <= tol {
            (e.abs() - eps).max(0.0)
        } else if beta[i] >= c - tol {
            (eps - e).max(0.0)
        } else if beta[i] <= -c + tol {
            (e + eps).max(0.0)
        } else {
            (e - eps * beta[i].signum()).abs()
        };
        worst = worst.max(v).max((beta[i].abs() - c).max(0.0));
    }
    worst
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x_t = c + sum phi_i x_{t-i} + e_t + sum theta_j e_{t-j}` with Gaussian `e`, after a burn-in.
pub fn simulate_arma(seed: u64, n: usize, c: f64, phi: &[f64], theta: &[f64], sd: f64) -> Vec<f64> {
    let burn = 200;
    let mut r = rng(seed);
    let normal = Normal::new(0.0, sd).unwrap();
    let total = n + burn;
    let mut x = vec![0.0; total];
    let mut e = vec![0.0; total];
    for t in 0..total {
        e[t] = normal.sample(&mut r);
        let mut v = c + e[t];
        for (i, p) in phi.iter().enumerate() {
            if t > i {
                v += p * x[t - 1 - i];
            }
        }
        for (j, q) in theta.iter().enumerate() {
            if t > j {
                v += q * e[t - 1 - j];
            }
        }
        x[t] = v;
    }
    x.split_off(burn)
}

pub fn random_walk(seed: u64, n: usize) -> Vec<f64> {
    let mut r = rng(seed);
    let mut level = 0.0;
    (0..n)
        .map(|_| {
            let e: f64 = StandardNormal.sample(&mut r);
            level += e;
            level
        })
        .collect()
}

pub fn white_noise(seed: u64, n: usize) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| StandardNormal.sample(&mut r)).collect()
}

/// Conditional sum of squares for an ARMA model with zero pre-sample innovations.
pub fn css(w: &[f64], c: f64, phi: &[f64], theta: &[f64], start: usize) -> f64 {
    let mut u = vec![0.0; w.len()];
    let mut sse = 0.0;
    for t in start..w.len() {
        let mut pred = c;
        for (i, p) in phi.iter().enumerate() {
            pred += p * w[t - 1 - i];
        }
        for (j, q) in theta.iter().enumerate() {
            if t > j {
                pred += q * u[t - 1 - j];
            }
        }
        u[t] = w[t] - pred;
        sse += u[t] * u[t];
    }
    sse
}

/// Canonical sample order matching the GRNN model's storage order.
fn canonical(inputs: &[Vec<f64>], targets: &[f64], skip: usize) -> Vec<(Vec<f64>, f64)> {
    let mut v: Vec<(Vec<f64>, f64)> = inputs
        .iter()
        .cloned()
        .zip(targets.iter().copied())
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, s)| s)
        .collect();
    v.sort_by(|a, b| {
        for (x, y) in a.0.iter().zip(&b.0) {
            let o = x.total_cmp(y);
            if o.is_ne() {
                return o;
            }
        }
        a.1.total_cmp(&b.1)
    });
    v
}

fn nw(samples: &[(Vec<f64>, f64)], x: &[f64], sigma: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    let mut nearest = (f64::INFINITY, 0.0);
    for (xj, tj) in samples {
        let d2: f64 = x.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 < nearest.0 {
            nearest = (d2, *tj);
        }
        let w = (-d2 / (2.0 * sigma * sigma)).exp();
        num += w * tj;
        den += w;
    }
    if den > 0.0 {
        num / den
    } else {
        nearest.1
    }
}

/// Direct leave-one-out MSE of a Nadaraya-Watson estimator.
pub fn grnn_loocv(inputs: &[Vec<f64>], targets: &[f64], sigma: f64) -> f64 {
    let n = inputs.len();
    let mut sse = 0.0;
    for i in 0..n {
        let rest = canonical(inputs, targets, i);
        let e = nw(&rest, &inputs[i], sigma) - targets[i];
        sse += e * e;
    }
    sse / n as f64
}

pub fn grnn_predict(inputs: &[Vec<f64>], targets: &[f64], x: &[f64], sigma: f64) -> f64 {
    nw(&canonical(inputs, targets, usize::MAX), x, sigma)
}
