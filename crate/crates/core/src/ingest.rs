//! Quarterly level series: CSV parsing, growth-rate construction and panel
//! alignment.
//!
//! The CSV layout is one header row followed by one row per quarter. The first
//! column holds a `YYYYQn` tag; every further column is one country's level
//! series. Empty cells are missing observations. Each column must contain a
//! single contiguous run of observations.

use std::collections::HashSet;
use std::io::Read;

use serde::Serialize;
use thiserror::Error;

use crate::quarter::Quarter;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("line {line}: {source}")]
    MalformedQuarter {
        line: u64,
        #[source]
        source: crate::quarter::QuarterParseError,
    },
    #[error("line {line}: column {label:?}: non-numeric cell {cell:?}")]
    NonNumeric { line: u64, label: String, cell: String },
    #[error("line {line}: quarter {found} does not follow {previous}")]
    OutOfOrder { line: u64, previous: Quarter, found: Quarter },
    #[error("line {line}: column {label:?} has a gap; observations must form one contiguous run")]
    NonContiguous { line: u64, label: String },
    #[error("column {label:?} has no observations")]
    EmptyColumn { label: String },
    #[error("missing header row")]
    MissingHeader,
    #[error("header has no series columns")]
    NoSeries,
    #[error("empty series label in header column {column}")]
    EmptyLabel { column: usize },
    #[error("duplicate label {label:?}")]
    DuplicateLabel { label: String },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("series {label:?} is empty or contains non-finite values")]
    InvalidValues { label: String },
    #[error("series {label:?} has {len} observations; at least {min} required")]
    TooShort { label: String, len: usize, min: usize },
    #[error("series {label:?} has non-positive level at {quarter}")]
    NonPositiveLevel { label: String, quarter: Quarter },
    #[error("unknown label {label:?}")]
    UnknownLabel { label: String },
    #[error("the selected series have no common sample")]
    EmptyIntersection,
    #[error("a panel needs at least 2 series, got {n}")]
    TooFewSeries { n: usize },
    #[error("a panel needs at least 2 observations per series, got {t}")]
    TooFewObservations { t: usize },
    #[error("panel rows have unequal lengths")]
    RaggedRows,
    #[error("series {label:?} has zero variance and cannot be standardized")]
    ZeroVariance { label: String },
    #[error("window [{offset}, {offset}+{len}) exceeds sample of {t} observations")]
    WindowOutOfRange { offset: usize, len: usize, t: usize },
}

/// One country's consecutive quarterly observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuarterlySeries {
    label: String,
    start: Quarter,
    values: Vec<f64>,
}

impl QuarterlySeries {
    pub fn new(label: impl Into<String>, start: Quarter, values: Vec<f64>) -> Result<Self, IngestError> {
        let label = label.into();
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(IngestError::InvalidValues { label });
        }
        Ok(QuarterlySeries { label, start, values })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn start(&self) -> Quarter {
        self.start
    }

    /// Last quarter covered (inclusive).
    pub fn end(&self) -> Quarter {
        self.start.offset(self.values.len() as i64 - 1)
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

    pub fn value_at(&self, quarter: Quarter) -> Option<f64> {
        let k = quarter.since(self.start);
        if k < 0 {
            return None;
        }
        self.values.get(k as usize).copied()
    }

    /// Multiplies every observation by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        QuarterlySeries {
            label: self.label.clone(),
            start: self.start,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    fn check_positive(&self) -> Result<(), IngestError> {
        match self.values.iter().position(|&v| v <= 0.0) {
            Some(k) => {
                Err(IngestError::NonPositiveLevel { label: self.label.clone(), quarter: self.start.offset(k as i64) })
            }
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMethod {
    /// `100 * (x_t / x_{t-4} - 1)`
    #[default]
    YoyPercent,
    /// `100 * ln(x_t / x_{t-4})`
    LogDiff,
}

impl GrowthMethod {
    pub fn apply(self, series: &QuarterlySeries) -> Result<QuarterlySeries, IngestError> {
        match self {
            GrowthMethod::YoyPercent => yoy_growth(series),
            GrowthMethod::LogDiff => log_growth(series),
        }
    }
}

const YEAR: usize = 4;

fn annual_growth(series: &QuarterlySeries, rate: impl Fn(f64, f64) -> f64) -> Result<QuarterlySeries, IngestError> {
    if series.len() <= YEAR {
        return Err(IngestError::TooShort { label: series.label.clone(), len: series.len(), min: YEAR + 1 });
    }
    series.check_positive()?;
    let values = series.values.windows(YEAR + 1).map(|w| rate(w[YEAR], w[0])).collect();
    Ok(QuarterlySeries { label: series.label.clone(), start: series.start.offset(YEAR as i64), values })
}

/// Year-over-year percent growth, quarter by quarter.
pub fn yoy_growth(series: &QuarterlySeries) -> Result<QuarterlySeries, IngestError> {
    annual_growth(series, |now, year_ago| 100.0 * (now / year_ago - 1.0))
}

/// Year-over-year log growth, scaled by 100.
pub fn log_growth(series: &QuarterlySeries) -> Result<QuarterlySeries, IngestError> {
    annual_growth(series, |now, year_ago| 100.0 * (now / year_ago).ln())
}

enum ColumnState {
    NotStarted,
    Running { start: Quarter, values: Vec<f64> },
    Ended { start: Quarter, values: Vec<f64> },
}

/// Parses a CSV document of quarterly levels.
pub fn parse_csv(text: &str) -> Result<Vec<QuarterlySeries>, IngestError> {
    read_csv(text.as_bytes())
}

/// Streaming variant of [`parse_csv`].
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<QuarterlySeries>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => return Err(IngestError::MissingHeader),
    };
    let mut labels = Vec::with_capacity(header.len().saturating_sub(1));
    let mut seen = HashSet::new();
    for (column, raw) in header.iter().enumerate().skip(1) {
        let label = raw.trim_start_matches('\u{feff}');
        if label.is_empty() {
            return Err(IngestError::EmptyLabel { column });
        }
        if !seen.insert(label.to_string()) {
            return Err(IngestError::DuplicateLabel { label: label.to_string() });
        }
        labels.push(label.to_string());
    }
    if labels.is_empty() {
        return Err(IngestError::NoSeries);
    }

    let mut columns: Vec<ColumnState> = labels.iter().map(|_| ColumnState::NotStarted).collect();
    let mut previous: Option<Quarter> = None;
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let tag = rec.get(0).unwrap_or_default().trim_start_matches('\u{feff}');
        let quarter: Quarter = tag.parse().map_err(|source| IngestError::MalformedQuarter { line, source })?;
        let contiguous = match previous {
            Some(prev) if quarter <= prev => {
                return Err(IngestError::OutOfOrder { line, previous: prev, found: quarter })
            }
            Some(prev) => quarter.since(prev) == 1,
            None => true,
        };
        previous = Some(quarter);

        for (k, column) in columns.iter_mut().enumerate() {
            let cell = rec.get(k + 1).unwrap_or_default();
            if cell.is_empty() {
                if let ColumnState::Running { start, values } = column {
                    *column = ColumnState::Ended { start: *start, values: std::mem::take(values) };
                }
                continue;
            }
            let value = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| IngestError::NonNumeric {
                line,
                label: labels[k].clone(),
                cell: cell.to_string(),
            })?;
            match column {
                ColumnState::NotStarted => {
                    *column = ColumnState::Running { start: quarter, values: vec![value] };
                }
                ColumnState::Running { values, .. } if contiguous => values.push(value),
                _ => return Err(IngestError::NonContiguous { line, label: labels[k].clone() }),
            }
        }
    }

    labels
        .into_iter()
        .zip(columns)
        .map(|(label, column)| match column {
            ColumnState::NotStarted => Err(IngestError::EmptyColumn { label }),
            ColumnState::Running { start, values } | ColumnState::Ended { start, values } => {
                Ok(QuarterlySeries { label, start, values })
            }
        })
        .collect()
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line());
    IngestError::Csv { line, message: err.to_string() }
}

/// Writes series in the layout accepted by [`parse_csv`], spanning the union
/// of their samples. Values use the shortest representation that parses back
/// to the same `f64`.
pub fn write_csv(series: &[QuarterlySeries]) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec!["date".to_string()];
    header.extend(series.iter().map(|s| s.label.clone()));
    wtr.write_record(&header).expect("in-memory write");
    if let (Some(first), Some(last)) = (series.iter().map(|s| s.start).min(), series.iter().map(|s| s.end()).max()) {
        let mut q = first;
        while q <= last {
            let mut row = vec![q.to_string()];
            row.extend(series.iter().map(|s| s.value_at(q).map(|v| v.to_string()).unwrap_or_default()));
            wtr.write_record(&row).expect("in-memory write");
            q = q.offset(1);
        }
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// An aligned `N x T` matrix of growth rates, one row per country.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Panel {
    labels: Vec<String>,
    start: Quarter,
    rows: Vec<Vec<f64>>,
    standardized: bool,
}

impl Panel {
    pub fn new(labels: Vec<String>, start: Quarter, rows: Vec<Vec<f64>>) -> Result<Self, IngestError> {
        if labels.len() != rows.len() {
            return Err(IngestError::RaggedRows);
        }
        if rows.len() < 2 {
            return Err(IngestError::TooFewSeries { n: rows.len() });
        }
        let t = rows[0].len();
        if rows.iter().any(|r| r.len() != t) {
            return Err(IngestError::RaggedRows);
        }
        if t < 2 {
            return Err(IngestError::TooFewObservations { t });
        }
        let mut seen = HashSet::new();
        for (label, row) in labels.iter().zip(&rows) {
            if !seen.insert(label.as_str()) {
                return Err(IngestError::DuplicateLabel { label: label.clone() });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(IngestError::InvalidValues { label: label.clone() });
            }
        }
        Ok(Panel { labels, start, rows, standardized: false })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn start(&self) -> Quarter {
        self.start
    }

    pub fn end(&self) -> Quarter {
        self.start.offset(self.t() as i64 - 1)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn t(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Centres every row and scales it to unit population variance.
    pub fn standardize(&self) -> Result<Panel, IngestError> {
        let rows = self
            .labels
            .iter()
            .zip(&self.rows)
            .map(|(label, row)| standardize_row(row).ok_or_else(|| IngestError::ZeroVariance { label: label.clone() }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Panel { labels: self.labels.clone(), start: self.start, rows, standardized: true })
    }

    /// Rows restricted to `labels`, in the order given. An empty list keeps every row.
    pub fn select<S: AsRef<str>>(&self, labels: &[S]) -> Result<Panel, IngestError> {
        if labels.is_empty() {
            return Ok(self.clone());
        }
        let mut rows = Vec::with_capacity(labels.len());
        let mut names = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let i = self.index_of(label).ok_or_else(|| IngestError::UnknownLabel { label: label.to_string() })?;
            rows.push(self.rows[i].clone());
            names.push(label.to_string());
        }
        let mut panel = Panel::new(names, self.start, rows)?;
        panel.standardized = self.standardized;
        Ok(panel)
    }

    /// The unstandardized sub-panel of `len` observations starting at `offset`.
    pub fn window(&self, offset: usize, len: usize) -> Result<Panel, IngestError> {
        let t = self.t();
        if offset + len > t {
            return Err(IngestError::WindowOutOfRange { offset, len, t });
        }
        let rows = self.rows.iter().map(|r| r[offset..offset + len].to_vec()).collect();
        Panel::new(self.labels.clone(), self.start.offset(offset as i64), rows)
    }
}

fn standardize_row(row: &[f64]) -> Option<Vec<f64>> {
    let t = row.len() as f64;
    let mean = row.iter().sum::<f64>() / t;
    let var = row.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / t;
    let sd = var.sqrt();
    let scale = row.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(sd > 1e-13 * scale.max(f64::MIN_POSITIVE)) {
        return None;
    }
    Some(row.iter().map(|x| (x - mean) / sd).collect())
}

/// Aligns the chosen series on their common sample. An empty `subset` selects
/// every series in input order.
pub fn build_panel<S: AsRef<str>>(
    series: &[QuarterlySeries],
    subset: &[S],
    standardize: bool,
) -> Result<Panel, IngestError> {
    let chosen: Vec<&QuarterlySeries> = if subset.is_empty() {
        series.iter().collect()
    } else {
        let mut seen = HashSet::new();
        subset
            .iter()
            .map(|label| {
                let label = label.as_ref();
                if !seen.insert(label) {
                    return Err(IngestError::DuplicateLabel { label: label.to_string() });
                }
                series
                    .iter()
                    .find(|s| s.label == label)
                    .ok_or_else(|| IngestError::UnknownLabel { label: label.to_string() })
            })
            .collect::<Result<_, _>>()?
    };
    if chosen.len() < 2 {
        return Err(IngestError::TooFewSeries { n: chosen.len() });
    }
    let start = chosen.iter().map(|s| s.start).max().expect("non-empty");
    let end = chosen.iter().map(|s| s.end()).min().expect("non-empty");
    if end < start {
        return Err(IngestError::EmptyIntersection);
    }
    let t = (end.since(start) + 1) as usize;
    let rows = chosen
        .iter()
        .map(|s| {
            let offset = start.since(s.start) as usize;
            s.values[offset..offset + t].to_vec()
        })
        .collect();
    let labels = chosen.iter().map(|s| s.label.clone()).collect();
    let panel = Panel::new(labels, start, rows)?;
    if standardize {
        panel.standardize()
    } else {
        Ok(panel)
    }
}
