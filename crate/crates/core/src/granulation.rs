//! Fuzzy information granulation: fixed windows summarised by triangular particles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

/// Triangular fuzzy particle `(a, m, b)` for one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyGranule {
    pub a: f64,
    pub m: f64,
    pub b: f64,
    pub window_index: usize,
}

impl FuzzyGranule {
    /// Triangular membership degree of `x`.
    ///
    /// A collapsed edge (`m == a` or `b == m`) contributes 1 at `x == m` and 0 elsewhere on that side.
    pub fn membership(&self, x: f64) -> f64 {
        let (a, m, b) = (self.a, self.m, self.b);
        if x < a || x > b {
            0.0
        } else if x == m {
            1.0
        } else if x < m {
            // a <= x < m, so m > a here
            (x - a) / (m - a)
        } else {
            (b - x) / (b - m)
        }
    }
}

/// Which of the three particle parameters a sequence tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GranuleParam {
    Min,
    Mean,
    Max,
}

impl GranuleParam {
    pub const ALL: [GranuleParam; 3] = [GranuleParam::Min, GranuleParam::Mean, GranuleParam::Max];

    pub fn index(self) -> usize {
        match self {
            GranuleParam::Min => 0,
            GranuleParam::Mean => 1,
            GranuleParam::Max => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GranuleParam::Min => "min",
            GranuleParam::Mean => "mean",
            GranuleParam::Max => "max",
        }
    }
}

/// The aligned Min/Mean/Max sequences of a granulated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GranuleSequences {
    pub min_seq: Vec<f64>,
    pub mean_seq: Vec<f64>,
    pub max_seq: Vec<f64>,
    pub window_len: usize,
    /// Trailing values that did not fill a window.
    pub dropped: usize,
}

impl GranuleSequences {
    pub fn len(&self) -> usize {
        self.mean_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean_seq.is_empty()
    }

    pub fn get(&self, param: GranuleParam) -> &[f64] {
        match param {
            GranuleParam::Min => &self.min_seq,
            GranuleParam::Mean => &self.mean_seq,
            GranuleParam::Max => &self.max_seq,
        }
    }

    pub fn as_array(&self) -> [&[f64]; 3] {
        [&self.min_seq, &self.mean_seq, &self.max_seq]
    }

    pub fn granules(&self) -> Vec<FuzzyGranule> {
        (0..self.len())
            .map(|i| FuzzyGranule {
                a: self.min_seq[i],
                m: self.mean_seq[i],
                b: self.max_seq[i],
                window_index: i,
            })
            .collect()
    }
}

/// Non-overlapping windows anchored at the series start.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<'a> {
    pub windows: Vec<&'a [f64]>,
    pub dropped: usize,
}

pub fn partition(values: &[f64], window_len: usize) -> Result<Partition<'_>> {
    if window_len < 1 {
        return Err(Error::InvalidArgument(
            "window length must be at least 1".into(),
        ));
    }
    if values.len() < window_len {
        return Err(Error::TooShort {
            needed: window_len,
            got: values.len(),
        });
    }
    let windows: Vec<&[f64]> = values.chunks_exact(window_len).collect();
    Ok(Partition {
        dropped: values.len() - windows.len() * window_len,
        windows,
    })
}

pub fn granulate_window(window: &[f64], window_index: usize) -> Result<FuzzyGranule> {
    if window.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot granulate an empty window".into(),
        ));
    }
    let mut a = f64::INFINITY;
    let mut b = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &v in window {
        if !v.is_finite() {
            return Err(Error::InvalidArgument(
                "window contains a non-finite value".into(),
            ));
        }
        a = a.min(v);
        b = b.max(v);
        sum += v;
    }
    // rounding can push the mean a hair outside [min, max]
    let m = (sum / window.len() as f64).clamp(a, b);
    Ok(FuzzyGranule {
        a,
        m,
        b,
        window_index,
    })
}

pub fn membership(granule: &FuzzyGranule, x: f64) -> f64 {
    granule.membership(x)
}

pub fn granulate_values(values: &[f64], window_len: usize) -> Result<GranuleSequences> {
    let part = partition(values, window_len)?;
    let mut seqs = GranuleSequences {
        min_seq: Vec::with_capacity(part.windows.len()),
        mean_seq: Vec::with_capacity(part.windows.len()),
        max_seq: Vec::with_capacity(part.windows.len()),
        window_len,
        dropped: part.dropped,
    };
    for (i, w) in part.windows.iter().enumerate() {
        let g = granulate_window(w, i)?;
        seqs.min_seq.push(g.a);
        seqs.mean_seq.push(g.m);
        seqs.max_seq.push(g.b);
    }
    Ok(seqs)
}

pub fn granulate_series(series: &TimeSeries, window_len: usize) -> Result<GranuleSequences> {
    granulate_values(series.values(), window_len)
}
