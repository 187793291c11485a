use crate::error::{Error, Result};

/// Applies first differencing `d` times.
pub fn difference(series: &[f64], d: usize) -> Result<Vec<f64>> {
    if series.len() <= d {
        return Err(Error::TooShort {
            needed: d + 1,
            got: series.len(),
        });
    }
    let mut out = series.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(out)
}

/// The last value of each differencing level `0..d` of `series`, used to undo differencing.
pub(crate) fn integration_anchors(series: &[f64], d: usize) -> Vec<f64> {
    let mut anchors = Vec::with_capacity(d);
    let mut level = series.to_vec();
    for _ in 0..d {
        anchors.push(*level.last().expect("series longer than d"));
        level = level.windows(2).map(|w| w[1] - w[0]).collect();
    }
    anchors
}

/// Inverts `d`-fold differencing of a continuation.
///
/// `anchors[k]` is the last observed value of the `k`-times differenced series;
/// `diffs` continues the `d`-times differenced series.
pub fn cumulate(diffs: &[f64], anchors: &[f64]) -> Vec<f64> {
    let mut out = diffs.to_vec();
    for &anchor in anchors.iter().rev() {
        let mut acc = anchor;
        for v in out.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    out
}
