//! Monthly series model, CSV ingestion, train/test splitting and min-max scaling.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar month, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YearMonth {
    year: i32,
    month: u8,
}

impl YearMonth {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidArgument(format!(
                "month {month} out of range 1..=12"
            )));
        }
        Ok(Self { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u8 {
        self.month
    }

    pub fn succ(self) -> Self {
        self.add_months(1)
    }

    pub fn add_months(self, n: i64) -> Self {
        let idx = self.ordinal() + n;
        Self {
            year: idx.div_euclid(12) as i32,
            month: (idx.rem_euclid(12) + 1) as u8,
        }
    }

    /// Months elapsed since year 0, used for gap arithmetic.
    fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn months_until(self, later: YearMonth) -> i64 {
        later.ordinal() - self.ordinal()
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected YYYY-MM, got {s:?}"));
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 || !y.bytes().chain(m.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        YearMonth::new(y.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)
    }
}

impl TryFrom<String> for YearMonth {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<YearMonth> for String {
    fn from(ym: YearMonth) -> String {
        ym.to_string()
    }
}

/// Ordered, gap-free monthly observations.
///
/// Stored as a start month plus values, so consecutive months hold by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    start: YearMonth,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start: YearMonth, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSeries(
                "series must contain at least one value".into(),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "value at index {i} is not finite"
            )));
        }
        Ok(Self { start, values })
    }

    /// Builds a series from explicit (month, value) points, rejecting gaps and disorder.
    pub fn from_points(points: &[(YearMonth, f64)]) -> Result<Self> {
        let (start, _) = *points
            .first()
            .ok_or_else(|| Error::InvalidSeries("series must contain at least one value".into()))?;
        for (i, w) in points.windows(2).enumerate() {
            if w[1].0 != w[0].0.succ() {
                return Err(Error::InvalidSeries(format!(
                    "timestamp {} at index {} does not follow {}",
                    w[1].0,
                    i + 1,
                    w[0].0
                )));
            }
        }
        Self::new(start, points.iter().map(|&(_, v)| v).collect())
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn end(&self) -> YearMonth {
        self.start.add_months(self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (YearMonth, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start.add_months(i as i64), v))
    }

    /// Appends `other`, which must start the month after `self` ends.
    pub fn concat(&self, other: &TimeSeries) -> Result<TimeSeries> {
        if other.start != self.end().succ() {
            return Err(Error::InvalidSeries(format!(
                "cannot append series starting {} after one ending {}",
                other.start,
                self.end()
            )));
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        TimeSeries::new(self.start, values)
    }
}

/// Parses `YYYY-MM,value` rows. A first row whose value field is not numeric is a header.
pub fn parse_csv(text: &str) -> Result<TimeSeries> {
    let mut points = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (date, value) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected `YYYY-MM,value`, got {line:?}")))?;
        let value = value.trim();
        let numeric = value.parse::<f64>();
        if idx == 0 && numeric.is_err() && date.trim().parse::<YearMonth>().is_err() {
            continue;
        }
        let value = numeric.map_err(|_| parse_err(format!("invalid value {value:?}")))?;
        if !value.is_finite() {
            return Err(parse_err(format!("non-finite value {value}")));
        }
        let date: YearMonth = date
            .trim()
            .parse()
            .map_err(|e: Error| parse_err(e.to_string()))?;
        if let Some(&(prev, _)) = points.last() {
            let prev: YearMonth = prev;
            if date != prev.succ() {
                return Err(parse_err(format!(
                    "timestamp {date} does not follow {prev} (series must be consecutive months)"
                )));
            }
        }
        points.push((date, value));
    }
    TimeSeries::from_points(&points)
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}

/// Writes the series as LF-terminated `YYYY-MM,value` rows without a header.
pub fn write_csv(series: &TimeSeries) -> String {
    let mut out = String::with_capacity(series.len() * 16);
    for (ym, v) in series.points() {
        out.push_str(&format!("{ym},{v}\n"));
    }
    out
}

/// Last month of the training segment (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_end: YearMonth,
}

pub fn split(series: &TimeSeries, spec: SplitSpec) -> Result<(TimeSeries, TimeSeries)> {
    let offset = series.start().months_until(spec.train_end);
    if offset < 0 || offset as usize + 1 >= series.len() {
        return Err(Error::InvalidSplit(format!(
            "train_end {} must lie in [{}, {}) so the test set is non-empty",
            spec.train_end,
            series.start(),
            series.end()
        )));
    }
    let cut = offset as usize + 1;
    let train = TimeSeries::new(series.start(), series.values[..cut].to_vec())?;
    let test = TimeSeries::new(spec.train_end.succ(), series.values[cut..].to_vec())?;
    Ok((train, test))
}

/// Min-max scaling onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingState {
    pub min: f64,
    pub max: f64,
}

impl ScalingState {
    /// Maps every value to itself.
    pub const IDENTITY: ScalingState = ScalingState { min: 0.0, max: 1.0 };

    pub fn fit(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot fit scaling on empty values".into(),
            ));
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in values {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(
                    "cannot fit scaling on non-finite values".into(),
                ));
            }
            min = min.min(v);
            max = max.max(v);
        }
        Ok(Self { min, max })
    }

    fn is_degenerate(&self) -> bool {
        self.max == self.min
    }

    pub fn apply(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            0.5
        } else {
            (x - self.min) / (self.max - self.min)
        }
    }

    pub fn invert(&self, z: f64) -> f64 {
        if self.is_degenerate() {
            self.min
        } else {
            self.min + z * (self.max - self.min)
        }
    }

    /// Converts a difference in scaled units back to original units.
    pub fn invert_delta(&self, dz: f64) -> f64 {
        dz * (self.max - self.min)
    }
}

pub fn scale_fit(values: &[f64]) -> Result<ScalingState> {
    ScalingState::fit(values)
}

pub fn scale_apply(state: &ScalingState, value: f64) -> f64 {
    state.apply(value)
}

pub fn scale_invert(state: &ScalingState, value: f64) -> f64 {
    state.invert(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ym(s: &str) -> YearMonth {
        s.parse().unwrap()
    }

    #[test]
    fn parses_three_rows() {
        let s = parse_csv("2001-01,104.1\n2001-02,104.0\n2001-03,103.9").unwrap();
        assert_eq!(s.values(), &[104.1, 104.0, 103.9]);
        assert_eq!(s.start(), ym("2001-01"));
        assert_eq!(s.end(), ym("2001-03"));
    }

    #[test]
    fn header_and_crlf_accepted() {
        let s = parse_csv("month,ppi\r\n2001-01,1\r\n2001-02,2\r\n").unwrap();
        assert_eq!(s.values(), &[1.0, 2.0]);
    }

    #[test]
    fn malformed_value_names_line_one() {
        match parse_csv("2001-01,x") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_later_row_names_its_line() {
        match parse_csv("2001-01,1\n2001-02,oops\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_gaps_disorder_and_nonfinite() {
        assert!(parse_csv("2001-01,1\n2001-03,2").is_err());
        assert!(parse_csv("2001-02,1\n2001-01,2").is_err());
        assert!(parse_csv("2001-01,1\n2001-01,2").is_err());
        assert!(parse_csv("2001-01,1\n2001-02,inf").is_err());
        assert!(parse_csv("2001-01,NaN").is_err());
        assert!(parse_csv("").is_err());
        assert!(parse_csv("2001-13,1").is_err());
    }

    #[test]
    fn year_boundary_is_consecutive() {
        let s = parse_csv("2001-12,1\n2002-01,2").unwrap();
        assert_eq!(s.end(), ym("2002-01"));
    }

    #[test]
    fn split_at_train_end() {
        let s = TimeSeries::new(ym("2001-01"), (0..192).map(|i| i as f64).collect()).unwrap();
        let (train, test) = split(
            &s,
            SplitSpec {
                train_end: ym("2016-09"),
            },
        )
        .unwrap();
        assert_eq!((train.len(), test.len()), (189, 3));
        assert_eq!(test.start(), ym("2016-10"));
    }

    #[test]
    fn split_at_penultimate_month() {
        let s = TimeSeries::new(ym("2001-01"), vec![1.0, 2.0, 3.0]).unwrap();
        let (train, test) = split(
            &s,
            SplitSpec {
                train_end: ym("2001-02"),
            },
        )
        .unwrap();
        assert_eq!(train.values(), &[1.0, 2.0]);
        assert_eq!(test.values(), &[3.0]);
    }

    #[test]
    fn split_rejects_out_of_range() {
        let s = TimeSeries::new(ym("2001-01"), vec![1.0, 2.0, 3.0]).unwrap();
        assert!(split(
            &s,
            SplitSpec {
                train_end: ym("2001-03")
            }
        )
        .is_err());
        assert!(split(
            &s,
            SplitSpec {
                train_end: ym("2000-12")
            }
        )
        .is_err());
        assert!(split(
            &s,
            SplitSpec {
                train_end: ym("2005-01")
            }
        )
        .is_err());
    }

    #[test]
    fn scaling_examples() {
        let st = scale_fit(&[0.0, 10.0]).unwrap();
        assert_eq!(scale_apply(&st, 5.0), 0.5);
        let c = scale_fit(&[7.0, 7.0, 7.0]).unwrap();
        assert_eq!(scale_apply(&c, 7.0), 0.5);
        assert_eq!(scale_invert(&c, 0.5), 7.0);
    }

    fn arb_series() -> impl Strategy<Value = TimeSeries> {
        (
            1990i32..2030,
            1u8..=12,
            prop::collection::vec(-1e6f64..1e6, 1..60),
        )
            .prop_map(|(y, m, v)| TimeSeries::new(YearMonth::new(y, m).unwrap(), v).unwrap())
    }

    proptest! {
        #[test]
        fn csv_round_trip(s in arb_series()) {
            let text = write_csv(&s);
            let back = parse_csv(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(write_csv(&back), text);
        }

        #[test]
        fn split_is_lossless(a in arb_series(), extra in prop::collection::vec(-1e3f64..1e3, 1..20)) {
            let b = TimeSeries::new(a.end().succ(), extra).unwrap();
            let joined = a.concat(&b).unwrap();
            let (l, r) = split(&joined, SplitSpec { train_end: a.end() }).unwrap();
            prop_assert_eq!(&l, &a);
            prop_assert_eq!(&r, &b);
            let mut rejoined = l.values().to_vec();
            rejoined.extend_from_slice(r.values());
            prop_assert_eq!(rejoined.as_slice(), joined.values());
        }

        #[test]
        fn scaling_inverts(lo in -1e4f64..1e4, width in 1e-3f64..1e4, fracs in prop::collection::vec(0.0f64..=1.0, 100)) {
            let st = scale_fit(&[lo, lo + width]).unwrap();
            for f in fracs {
                let x = lo + f * width;
                let back = scale_invert(&st, scale_apply(&st, x));
                prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0), "{x} -> {back}");
            }
        }
    }
}
