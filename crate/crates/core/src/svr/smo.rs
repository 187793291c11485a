//! Pairwise coordinate descent (SMO) on the epsilon-SVR dual.
//!
//! The dual is written over `2n` multipliers `alpha` (first `n` for the upper tube
//! edge, last `n` for the lower edge) with sign vector `s`:
//!
//! ```text
//! min 1/2 a'Qa + p'a   s.t.  s'a = 0,  0 <= a <= C
//! Q[t][u] = s_t s_u K(t mod n, u mod n),  p_t = eps - s_t y_(t mod n)
//! ```
//!
//! Working pairs are chosen by the maximal-violating-pair rule and each pair is
//! solved in closed form, so the objective never increases.

use super::kernel::KernelMatrix;

const TAU: f64 = 1e-12;

/// Solution of the dual in terms of `beta_i = alpha_i - alpha_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub beta: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Final maximal-violating-pair gap.
    pub kkt_gap: f64,
    /// Dual objective value (to be maximised).
    pub objective: f64,
}

struct Problem<'a> {
    k: &'a KernelMatrix,
    n: usize,
    c: f64,
    alpha: Vec<f64>,
    grad: Vec<f64>,
    p: Vec<f64>,
}

impl Problem<'_> {
    #[inline]
    fn sign(&self, t: usize) -> f64 {
        if t < self.n {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    fn q(&self, t: usize, u: usize) -> f64 {
        self.sign(t) * self.sign(u) * self.k.get(t % self.n, u % self.n)
    }

    #[inline]
    fn in_up(&self, t: usize) -> bool {
        if t < self.n {
            self.alpha[t] < self.c
        } else {
            self.alpha[t] > 0.0
        }
    }

    #[inline]
    fn in_low(&self, t: usize) -> bool {
        if t < self.n {
            self.alpha[t] > 0.0
        } else {
            self.alpha[t] < self.c
        }
    }

    /// Returns `(i, j, m, M)`: the maximal violating pair and the extremes of `-s G`.
    fn select(&self) -> (Option<usize>, Option<usize>, f64, f64) {
        let mut gmax = f64::NEG_INFINITY;
        let mut gmin = f64::INFINITY;
        let (mut i, mut j) = (None, None);
        for t in 0..2 * self.n {
            let v = -self.sign(t) * self.grad[t];
            if self.in_up(t) && v > gmax {
                gmax = v;
                i = Some(t);
            }
            if self.in_low(t) && v < gmin {
                gmin = v;
                j = Some(t);
            }
        }
        (i, j, gmax, gmin)
    }

    fn update_pair(&mut self, i: usize, j: usize) {
        let c = self.c;
        let (old_i, old_j) = (self.alpha[i], self.alpha[j]);
        let qij = self.q(i, j);
        let (qii, qjj) = (self.q(i, i), self.q(j, j));
        let (mut ai, mut aj) = (old_i, old_j);

        if self.sign(i) != self.sign(j) {
            let mut quad = qii + qjj + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-self.grad[i] - self.grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let mut quad = qii + qjj - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (self.grad[i] - self.grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }

        self.alpha[i] = ai;
        self.alpha[j] = aj;
        let (di, dj) = (ai - old_i, aj - old_j);
        if di == 0.0 && dj == 0.0 {
            return;
        }
        for t in 0..2 * self.n {
            self.grad[t] += self.q(t, i) * di + self.q(t, j) * dj;
        }
    }

    fn primal_value(&self) -> f64 {
        0.5 * self
            .alpha
            .iter()
            .zip(self.grad.iter().zip(&self.p))
            .map(|(a, (g, p))| a * (g + p))
            .sum::<f64>()
    }

    fn bias(&self, gmax: f64, gmin: f64) -> f64 {
        let mut sum = 0.0;
        let mut free = 0usize;
        for t in 0..2 * self.n {
            if self.alpha[t] > 0.0 && self.alpha[t] < self.c {
                sum += -self.sign(t) * self.grad[t];
                free += 1;
            }
        }
        if free > 0 {
            sum / free as f64
        } else if gmax.is_finite() && gmin.is_finite() {
            0.5 * (gmax + gmin)
        } else if gmax.is_finite() {
            gmax
        } else {
            gmin
        }
    }
}

/// Solves the epsilon-SVR dual for targets `y` (already in solver units).
///
/// When `trace` is given, the dual objective is appended after every iteration.
pub fn solve_dual(
    k: &KernelMatrix,
    y: &[f64],
    c: f64,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
    mut trace: Option<&mut Vec<f64>>,
) -> DualSolution {
    let n = y.len();
    assert_eq!(k.len(), n, "kernel matrix does not match targets");
    let p: Vec<f64> = (0..2 * n)
        .map(|t| {
            if t < n {
                epsilon - y[t]
            } else {
                epsilon + y[t - n]
            }
        })
        .collect();
    let mut prob = Problem {
        k,
        n,
        c,
        alpha: vec![0.0; 2 * n],
        grad: p.clone(),
        p,
    };

    let mut iterations = 0;
    let mut converged = false;
    let (mut gmax, mut gmin);
    loop {
        let (i, j, hi, lo) = prob.select();
        gmax = hi;
        gmin = lo;
        let (Some(i), Some(j)) = (i, j) else {
            converged = true;
            break;
        };
        if gmax - gmin < tol {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        prob.update_pair(i, j);
        iterations += 1;
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(-prob.primal_value());
        }
    }

    let bias = prob.bias(gmax, gmin);
    let beta: Vec<f64> = (0..n).map(|i| prob.alpha[i] - prob.alpha[i + n]).collect();
    DualSolution {
        beta,
        bias,
        iterations,
        converged,
        kkt_gap: (gmax - gmin).max(0.0),
        objective: -prob.primal_value(),
    }
}
