use nalgebra::{DMatrix, DVector};

/// Ordinary least squares fit.
#[derive(Debug, Clone)]
pub(crate) struct OlsFit {
    pub coeffs: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub sse: f64,
    pub nobs: usize,
}

/// Regresses `y` on the columns given row-wise in `rows`. Returns `None` when the
/// design is rank deficient or has no residual degrees of freedom.
pub(crate) fn ols(rows: &[Vec<f64>], y: &[f64]) -> Option<OlsFit> {
    let n = y.len();
    let k = rows.first()?.len();
    if n <= k || k == 0 {
        return None;
    }
    let x = DMatrix::from_fn(n, k, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let xtx = x.transpose() * &x;
    let chol = xtx.cholesky()?;
    let beta = chol.solve(&(x.transpose() * &yv));
    let resid = &yv - &x * &beta;
    let sse = resid.norm_squared();
    let s2 = sse / (n - k) as f64;
    let inv = chol.inverse();
    Some(OlsFit {
        coeffs: beta.iter().copied().collect(),
        std_errors: (0..k).map(|j| (s2 * inv[(j, j)]).max(0.0).sqrt()).collect(),
        sse,
        nobs: n,
    })
}
