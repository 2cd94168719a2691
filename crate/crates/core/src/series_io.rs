//! Loading, validating, shifting and windowing of time-series data.
//!
//! A [`TimeSeries`] is a positional sequence of labelled values. Labels are
//! opaque strings (usually dates) and are only consulted when resolving
//! window boundaries; ordering is always the file order.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default additive offset used by [`to_positive_plane`].
pub const DEFAULT_SHIFT_EPSILON: f64 = 1.0;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("input contains no data rows")]
    EmptyInput,
    #[error("row {row}: value {value:?} is not a number")]
    MalformedValue { row: u64, value: String },
    #[error("row {row}: value {value} is not finite")]
    NonFiniteValue { row: u64, value: f64 },
    #[error("row {row}: {reason}")]
    MalformedRow { row: u64, reason: String },
    #[error("column {0:?} not found in header")]
    UnknownColumn(String),
    #[error("column selection by name requires a header row")]
    NamedColumnWithoutHeader,
    #[error("labels and values differ in length ({labels} vs {values})")]
    LengthMismatch { labels: usize, values: usize },
    #[error("value at position {index} is not finite")]
    NotFinite { index: usize },
    #[error("window boundary label {label:?} not found in series")]
    BoundaryNotFound { label: String },
    #[error("window {name:?} resolves to {len} samples, need at least 2")]
    WindowTooShort { name: String, len: usize },
    #[error("window {name:?} starts after it ends")]
    WindowInverted { name: String },
    #[error("window {name:?} overlaps or precedes the previous window")]
    WindowOverlap { name: String },
    #[error("window spec line {line}: {reason}")]
    WindowSyntax { line: usize, reason: String },
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for SeriesError {
    fn from(e: csv::Error) -> Self {
        let row = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Utf8 { err, .. } => SeriesError::MalformedRow {
                row,
                reason: err.to_string(),
            },
            kind => SeriesError::Csv(format!("{kind:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self, SeriesError> {
        if labels.len() != values.len() {
            return Err(SeriesError::LengthMismatch {
                labels: labels.len(),
                values: values.len(),
            });
        }
        if values.is_empty() {
            return Err(SeriesError::EmptyInput);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SeriesError::NotFinite { index });
        }
        Ok(Self { labels, values })
    }

    /// Series labelled by position (`"0"`, `"1"`, ...).
    pub fn from_values(values: Vec<f64>) -> Result<Self, SeriesError> {
        let labels = (0..values.len()).map(|i| i.to_string()).collect();
        Self::new(labels, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Returns a new series with every value mapped through `f`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self, SeriesError> {
        Self::new(
            self.labels.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Positions whose label is a duplicate of, or sorts before, the previous
    /// label. Ordering is positional, so these are only reported.
    pub fn label_order_issues(&self) -> Vec<usize> {
        self.labels
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] <= w[0])
            .map(|(i, _)| i + 1)
            .collect()
    }

    fn slice(&self, start: usize, end_inclusive: usize) -> Self {
        Self {
            labels: self.labels[start..=end_inclusive].to_vec(),
            values: self.values[start..=end_inclusive].to_vec(),
        }
    }
}

/// Column selector for [`load_csv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Index(i) => write!(f, "{i}"),
            Column::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvConfig {
    pub delimiter: u8,
    pub has_header: bool,
    /// `None` labels rows by their zero-based data position.
    pub label_column: Option<Column>,
    pub value_column: Column,
}

impl Default for CsvConfig {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: false,
            label_column: Some(Column::Index(0)),
            value_column: Column::Index(1),
        }
    }
}

fn resolve_column(col: &Column, header: Option<&csv::StringRecord>) -> Result<usize, SeriesError> {
    match col {
        Column::Index(i) => Ok(*i),
        Column::Name(name) => {
            let header = header.ok_or(SeriesError::NamedColumnWithoutHeader)?;
            header
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| SeriesError::UnknownColumn(name.clone()))
        }
    }
}

/// Parses delimited text into a series. Row numbers in errors are 1-based
/// physical line numbers.
pub fn load_csv<R: Read>(source: R, config: &CsvConfig) -> Result<TimeSeries, SeriesError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let mut records = reader.records();
    let header = if config.has_header {
        match records.next() {
            Some(r) => Some(r?),
            None => return Err(SeriesError::EmptyInput),
        }
    } else {
        None
    };
    let value_idx = resolve_column(&config.value_column, header.as_ref())?;
    let label_idx = config
        .label_column
        .as_ref()
        .map(|c| resolve_column(c, header.as_ref()))
        .transpose()?;

    let mut labels = Vec::new();
    let mut values = Vec::new();
    for record in records {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let raw = record
            .get(value_idx)
            .ok_or_else(|| SeriesError::MalformedRow {
                row,
                reason: format!("missing value column {value_idx}"),
            })?;
        let value: f64 = raw.parse().map_err(|_| SeriesError::MalformedValue {
            row,
            value: raw.to_string(),
        })?;
        if !value.is_finite() {
            return Err(SeriesError::NonFiniteValue { row, value });
        }
        let label = match label_idx {
            Some(i) => record
                .get(i)
                .ok_or_else(|| SeriesError::MalformedRow {
                    row,
                    reason: format!("missing label column {i}"),
                })?
                .to_string(),
            None => values.len().to_string(),
        };
        labels.push(label);
        values.push(value);
    }
    if values.is_empty() {
        return Err(SeriesError::EmptyInput);
    }

    let series = TimeSeries::new(labels, values)?;
    let issues = series.label_order_issues();
    if let Some(&first) = issues.first() {
        log::warn!(
            "{} label(s) duplicate or out of order (first at position {first}, {:?}); using file order",
            issues.len(),
            series.labels[first]
        );
    }
    Ok(series)
}

/// Writes `label,value` rows without a header, readable by [`load_csv`]
/// with the default config. Values use the shortest round-trip decimal form.
pub fn save_csv<W: Write>(series: &TimeSeries, mut sink: W) -> std::io::Result<()> {
    for (label, value) in series.labels.iter().zip(&series.values) {
        writeln!(sink, "{label},{value}")?;
    }
    sink.flush()
}

/// Shifts the series so that every value is strictly positive.
///
/// Series whose minimum is already positive are returned unchanged, which
/// makes the operation idempotent.
pub fn to_positive_plane(series: &TimeSeries, epsilon: f64) -> TimeSeries {
    assert!(epsilon > 0.0, "shift offset must be positive");
    let min = series.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        return series.clone();
    }
    let shift = -min + epsilon;
    TimeSeries {
        labels: series.labels.clone(),
        values: series.values.iter().map(|v| v + shift).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub start: String,
    pub end: String,
    pub name: String,
}

/// Ordered, non-overlapping windows keyed by inclusive boundary labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WindowSpec {
    pub windows: Vec<Window>,
}

impl WindowSpec {
    /// Parses one `start,end,name` triple. The name may contain commas.
    pub fn parse_entry(text: &str) -> Result<Window, String> {
        let mut parts = text.splitn(3, ',').map(str::trim);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(e), Some(n)) if !s.is_empty() && !e.is_empty() && !n.is_empty() => {
                Ok(Window {
                    start: s.to_string(),
                    end: e.to_string(),
                    name: n.to_string(),
                })
            }
            _ => Err(format!("expected `start,end,name`, got {text:?}")),
        }
    }

    /// Line-oriented format: one `start,end,name` per line, `#` comments and
    /// blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, SeriesError> {
        let windows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(line, l)| {
                Self::parse_entry(l).map_err(|reason| SeriesError::WindowSyntax { line, reason })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { windows })
    }

    pub fn whole(series: &TimeSeries, name: &str) -> Self {
        Self {
            windows: vec![Window {
                start: series.labels[0].clone(),
                end: series.labels[series.len() - 1].clone(),
                name: name.to_string(),
            }],
        }
    }
}

/// Cuts the series into the contiguous slices named by `spec`.
pub fn partition_windows(
    series: &TimeSeries,
    spec: &WindowSpec,
) -> Result<Vec<(String, TimeSeries)>, SeriesError> {
    let locate = |label: &str| {
        series
            .position_of(label)
            .ok_or_else(|| SeriesError::BoundaryNotFound {
                label: label.to_string(),
            })
    };
    let mut out = Vec::with_capacity(spec.windows.len());
    let mut previous_end: Option<usize> = None;
    for w in &spec.windows {
        let start = locate(&w.start)?;
        let end = locate(&w.end)?;
        if end < start {
            return Err(SeriesError::WindowInverted {
                name: w.name.clone(),
            });
        }
        if previous_end.is_some_and(|p| start <= p) {
            return Err(SeriesError::WindowOverlap {
                name: w.name.clone(),
            });
        }
        let len = end - start + 1;
        if len < 2 {
            return Err(SeriesError::WindowTooShort {
                name: w.name.clone(),
                len,
            });
        }
        previous_end = Some(end);
        out.push((w.name.clone(), series.slice(start, end)));
    }
    Ok(out)
}
