//! Time series containers, CSV ingestion, date alignment and profiles.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A uniformly sampled real series, optionally labelled with calendar dates.
///
/// Invariants: at least one value, all values finite, and when labels are
/// present there is exactly one per value and they strictly increase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries<T = f64> {
    name: String,
    values: Vec<T>,
    labels: Option<Vec<NaiveDate>>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(name: impl Into<String>, values: Vec<T>) -> Result<Self> {
        let name = name.into();
        validate_values(&values)?;
        Ok(Self {
            name,
            values,
            labels: None,
        })
    }

    pub fn with_labels(
        name: impl Into<String>,
        values: Vec<T>,
        labels: Vec<NaiveDate>,
    ) -> Result<Self> {
        let name = name.into();
        validate_values(&values)?;
        if labels.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} labels for {} values",
                labels.len(),
                values.len()
            )));
        }
        if let Some(i) = labels.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotonicDates {
                row: i + 2,
                previous: labels[i].to_string(),
                current: labels[i + 1].to_string(),
            });
        }
        Ok(Self {
            name,
            values,
            labels: Some(labels),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[NaiveDate]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Applies `f` to every value, keeping name and labels.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Result<TimeSeries<U>> {
        let values: Vec<U> = self.values.iter().map(|&v| f(v)).collect();
        validate_values(&values)?;
        Ok(TimeSeries {
            name: self.name.clone(),
            values,
            labels: self.labels.clone(),
        })
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Result<TimeSeries<U>> {
        self.map(|v| U::lit(v.as_f64()))
    }

    /// Time-reversed copy. Labels are dropped since reversed dates would
    /// violate monotonicity.
    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            name: self.name.clone(),
            values,
            labels: None,
        }
    }
}

fn validate_values<T: Scalar>(values: &[T]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidSeries("series must hold at least one value".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries(format!("non-finite value at index {i}")));
    }
    Ok(())
}

/// Selects a CSV column by header name or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Name(String),
    Index(usize),
}

impl From<&str> for Column {
    fn from(s: &str) -> Self {
        Column::Name(s.to_owned())
    }
}

impl From<usize> for Column {
    fn from(i: usize) -> Self {
        Column::Index(i)
    }
}

impl Column {
    /// Parses a command-line selector: a bare non-negative integer is a
    /// position, anything else a header name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_owned()),
        }
    }

    fn resolve(&self, header: &csv::StringRecord) -> Result<(usize, String)> {
        match self {
            Column::Name(name) => header
                .iter()
                .position(|h| h.trim() == name)
                .map(|i| (i, name.clone()))
                .ok_or_else(|| Error::MissingColumn(name.clone())),
            Column::Index(i) => header
                .get(*i)
                .map(|h| (*i, h.trim().to_owned()))
                .ok_or_else(|| Error::MissingColumn(format!("#{i}"))),
        }
    }
}

/// Reads one numeric column (and optionally an ISO-8601 date column) from a
/// headed, comma-separated file. The series is named after the file stem.
pub fn load_csv(
    path: impl AsRef<Path>,
    column: impl Into<Column>,
    date_column: Option<&str>,
) -> Result<TimeSeries<f64>> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_owned()),
        _ => Error::Io {
            path: path.to_owned(),
            message: e.to_string(),
        },
    })?;
    let mut body = String::new();
    file.read_to_string(&mut body).map_err(|e| Error::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    parse_csv(&body, name, column.into(), date_column)
}

/// [`load_csv`] over an in-memory body.
pub fn parse_csv(
    body: &str,
    name: impl Into<String>,
    column: Column,
    date_column: Option<&str>,
) -> Result<TimeSeries<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(body.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::ParseError {
            row: 1,
            column: String::new(),
            token: String::new(),
            reason: e.to_string(),
        })?
        .clone();
    if header.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::ParseError {
            row: 1,
            column: column_label(&column),
            token: String::new(),
            reason: "missing header row".into(),
        });
    }
    let (value_idx, value_name) = column.resolve(&header)?;
    let date_idx = date_column
        .map(|d| Column::Name(d.to_owned()).resolve(&header))
        .transpose()?;

    let mut values = Vec::new();
    let mut labels: Vec<NaiveDate> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::ParseError {
            row,
            column: value_name.clone(),
            token: String::new(),
            reason: e.to_string(),
        })?;
        let token = record.get(value_idx).unwrap_or("").trim();
        let value = parse_value(token).map_err(|reason| Error::ParseError {
            row,
            column: value_name.clone(),
            token: token.to_owned(),
            reason,
        })?;
        values.push(value);
        if let Some((idx, ref date_name)) = date_idx {
            let token = record.get(idx).unwrap_or("").trim();
            let date = NaiveDate::parse_from_str(token, "%Y-%m-%d").map_err(|e| {
                Error::ParseError {
                    row,
                    column: date_name.clone(),
                    token: token.to_owned(),
                    reason: e.to_string(),
                }
            })?;
            if let Some(prev) = labels.last() {
                if *prev >= date {
                    return Err(Error::NonMonotonicDates {
                        row,
                        previous: prev.to_string(),
                        current: date.to_string(),
                    });
                }
            }
            labels.push(date);
        }
    }
    if values.is_empty() {
        return Err(Error::ParseError {
            row: 2,
            column: value_name,
            token: String::new(),
            reason: "no data rows".into(),
        });
    }
    if date_idx.is_some() {
        TimeSeries::with_labels(name, values, labels)
    } else {
        TimeSeries::new(name, values)
    }
}

fn column_label(column: &Column) -> String {
    match column {
        Column::Name(n) => n.clone(),
        Column::Index(i) => format!("#{i}"),
    }
}

fn parse_value(token: &str) -> std::result::Result<f64, String> {
    if token.is_empty() {
        return Err("empty cell".into());
    }
    let v: f64 = token.parse().map_err(|_| "not a number".to_string())?;
    if !v.is_finite() {
        return Err("non-finite value".into());
    }
    Ok(v)
}

/// Formats `v` with 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a series as CSV: `date,value` when labelled, `index,value`
/// otherwise.
pub fn to_csv<T: Scalar>(series: &TimeSeries<T>) -> String {
    let mut out = String::new();
    match series.labels() {
        Some(labels) => {
            out.push_str("date,value\n");
            for (d, v) in labels.iter().zip(series.values()) {
                out.push_str(&format!("{},{}\n", d.format("%Y-%m-%d"), format_f64(v.as_f64())));
            }
        }
        None => {
            out.push_str("index,value\n");
            for (i, v) in series.values().iter().enumerate() {
                out.push_str(&format!("{i},{}\n", format_f64(v.as_f64())));
            }
        }
    }
    out
}

/// Restricts both series to the dates they share.
pub fn align_by_date<T: Scalar>(
    a: &TimeSeries<T>,
    b: &TimeSeries<T>,
) -> Result<(TimeSeries<T>, TimeSeries<T>)> {
    let la = a
        .labels()
        .ok_or_else(|| Error::MissingLabels(a.name().to_owned()))?;
    let lb = b
        .labels()
        .ok_or_else(|| Error::MissingLabels(b.name().to_owned()))?;
    let in_b: HashSet<NaiveDate> = lb.iter().copied().collect();
    let shared: HashSet<NaiveDate> = la.iter().copied().filter(|d| in_b.contains(d)).collect();
    if shared.is_empty() {
        return Err(Error::NoOverlap);
    }
    let restrict = |s: &TimeSeries<T>, labels: &[NaiveDate]| {
        let (dates, values): (Vec<_>, Vec<_>) = labels
            .iter()
            .zip(s.values())
            .filter(|(d, _)| shared.contains(d))
            .map(|(d, v)| (*d, *v))
            .unzip();
        TimeSeries::with_labels(s.name(), values, dates)
    };
    Ok((restrict(a, la)?, restrict(b, lb)?))
}

/// Cumulative sum of the mean-centred series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile<T = f64> {
    values: Vec<T>,
}

impl<T: Scalar> Profile<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Length of the series the profile was built from.
    pub fn source_len(&self) -> usize {
        self.values.len()
    }

    /// Wraps raw profile values. Used by tests and callers that build
    /// profiles themselves.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: values.len(),
            });
        }
        Ok(Self { values })
    }
}

pub fn build_profile<T: Scalar>(x: &TimeSeries<T>) -> Result<Profile<T>> {
    let values = x.values();
    if values.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: values.len(),
        });
    }
    let mean = values.iter().copied().sum::<T>() / T::from_count(values.len());
    let mut acc = T::zero();
    let profile = values
        .iter()
        .map(|&v| {
            acc = acc + (v - mean);
            acc
        })
        .collect();
    Ok(Profile { values: profile })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day(d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2016, 10, d).unwrap()
    }

    fn dated(values: &[f64], days: &[u32]) -> TimeSeries {
        TimeSeries::with_labels("s", values.to_vec(), days.iter().map(|&d| day(d)).collect())
            .unwrap()
    }

    #[test]
    fn parses_dated_column() {
        let s = parse_csv(
            "date,v\n2016-10-17,640.0\n2016-10-18,655.2",
            "btc",
            "v".into(),
            Some("date"),
        )
        .unwrap();
        assert_eq!(s.values(), &[640.0, 655.2]);
        assert_eq!(s.labels().unwrap(), &[day(17), day(18)]);
        assert_eq!(s.name(), "btc");
    }

    #[test]
    fn blank_cell_reports_row_and_column() {
        let err = parse_csv("date,v\n2016-10-17,1\n2016-10-18,\n", "s", "v".into(), None)
            .unwrap_err();
        match err {
            Error::ParseError { row, column, .. } => {
                assert_eq!(row, 3);
                assert_eq!(column, "v");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_decreasing_dates() {
        let err = parse_csv(
            "date,v\n2016-10-18,1\n2016-10-17,2\n",
            "s",
            "v".into(),
            Some("date"),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonMonotonicDates { row: 3, .. }));
    }

    #[test]
    fn rejects_non_finite_and_garbage() {
        for body in ["v\nNaN\n", "v\ninf\n", "v\nabc\n"] {
            let err = parse_csv(body, "s", "v".into(), None).unwrap_err();
            assert!(matches!(err, Error::ParseError { row: 2, .. }), "{body}: {err:?}");
        }
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(
            parse_csv("", "s", "v".into(), None),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            parse_csv("v\n", "s", "v".into(), None),
            Err(Error::ParseError { row: 2, .. })
        ));
    }

    #[test]
    fn column_by_index_and_missing_column() {
        let s = parse_csv("a,b\n1,2\n3,4\n", "s", Column::Index(1), None).unwrap();
        assert_eq!(s.values(), &[2.0, 4.0]);
        assert_eq!(
            parse_csv("a,b\n1,2\n", "s", "c".into(), None).unwrap_err(),
            Error::MissingColumn("c".into())
        );
    }

    #[test]
    fn missing_file() {
        let err = load_csv("/nonexistent/file.csv", "v", None).unwrap_err();
        assert!(matches!(err, Error::FileNotFound(_)));
    }

    #[test]
    fn align_keeps_intersection() {
        let a = dated(&[1.0, 2.0, 3.0], &[1, 2, 3]);
        let b = dated(&[20.0, 30.0, 40.0], &[2, 3, 4]);
        let (ra, rb) = align_by_date(&a, &b).unwrap();
        assert_eq!(ra.values(), &[2.0, 3.0]);
        assert_eq!(rb.values(), &[20.0, 30.0]);
        assert_eq!(ra.labels().unwrap(), &[day(2), day(3)]);
        assert_eq!(rb.labels(), ra.labels());
    }

    #[test]
    fn align_identity_and_errors() {
        let a = dated(&[1.0, 2.0], &[1, 2]);
        let (ra, rb) = align_by_date(&a, &a).unwrap();
        assert_eq!(ra, a);
        assert_eq!(rb, a);

        let b = dated(&[1.0, 2.0], &[3, 4]);
        assert_eq!(align_by_date(&a, &b).unwrap_err(), Error::NoOverlap);

        let bare = TimeSeries::new("bare", vec![1.0, 2.0]).unwrap();
        assert!(matches!(align_by_date(&a, &bare), Err(Error::MissingLabels(_))));
    }

    #[test]
    fn profile_hand_values() {
        let x = TimeSeries::new("x", vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(build_profile(&x).unwrap().values(), &[-1.0, -1.0, 0.0]);

        let c = TimeSeries::new("c", vec![2.5; 7]).unwrap();
        assert!(build_profile(&c).unwrap().values().iter().all(|&v| v == 0.0));

        let one = TimeSeries::new("one", vec![1.0]).unwrap();
        assert_eq!(
            build_profile(&one).unwrap_err(),
            Error::TooShort { needed: 2, got: 1 }
        );
    }

    #[test]
    fn series_invariants() {
        assert!(TimeSeries::<f64>::new("e", vec![]).is_err());
        assert!(TimeSeries::new("n", vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::with_labels("l", vec![1.0, 2.0], vec![day(1)]).is_err());
        assert!(TimeSeries::with_labels("l", vec![1.0, 2.0], vec![day(2), day(2)]).is_err());
    }
}
