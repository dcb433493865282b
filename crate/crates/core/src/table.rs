//! Labeled two-way contingency tables and their CSV ingestion.
//!
//! Two layouts are accepted:
//!
//! * **long**: one `(row, column, value)` record per line, with the three
//!   fields picked out of the header by name. Repeated pairs are summed and
//!   absent pairs are zero.
//! * **matrix**: a header of column labels (the corner cell is ignored),
//!   then one line per row label followed by its cells.
//!
//! Cells are reals rather than counts so that tables of rates can be analysed
//! with the same formulas. Labels keep their first-appearance order.

use std::collections::HashMap;

use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error("input has no data rows")]
    EmptyInput,
    #[error("field `{0}` is not present in the header")]
    MissingField(String),
    #[error("line {line}: bad value `{text}` ({reason})")]
    BadValue {
        line: u64,
        text: String,
        reason: &'static str,
    },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("line {line}: empty label")]
    EmptyLabel { line: u64 },
    #[error("{axis} `{label}` has a zero total")]
    ZeroMargin { axis: Axis, label: String },
    #[error("negative entry at row `{row}`, column `{col}`")]
    NegativeEntry { row: String, col: String },
    #[error("non-finite entry at row `{row}`, column `{col}`")]
    NonFiniteEntry { row: String, col: String },
    #[error("table is {rows}x{cols}; at least 2x2 is required")]
    TooSmall { rows: usize, cols: usize },
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::Row => "row",
            Axis::Column => "column",
        })
    }
}

/// A labeled non-negative `a x b` table.
///
/// A table built by the parsers is structurally sound (distinct labels,
/// rectangular counts) but not yet certified; call [`ContingencyTable::validate`]
/// before analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    counts: Matrix,
    grand_total: f64,
}

impl ContingencyTable {
    /// Builds a table from labels and a matching count matrix.
    ///
    /// Checks shape and label distinctness only; values are checked by
    /// [`validate`](Self::validate).
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        counts: Matrix,
    ) -> Result<Self, TableError> {
        if counts.rows() != row_labels.len() || counts.cols() != col_labels.len() {
            return Err(TableError::Shape(format!(
                "{} row labels and {} column labels for a {}x{} matrix",
                row_labels.len(),
                col_labels.len(),
                counts.rows(),
                counts.cols()
            )));
        }
        check_distinct(&row_labels)?;
        check_distinct(&col_labels)?;
        let grand_total = counts.sum();
        Ok(ContingencyTable {
            row_labels,
            col_labels,
            counts,
            grand_total,
        })
    }

    /// Builds a table from string-slice labels and nested rows.
    pub fn from_rows<R: AsRef<[f64]>>(
        row_labels: &[&str],
        col_labels: &[&str],
        rows: &[R],
    ) -> Result<Self, TableError> {
        ContingencyTable::new(
            row_labels.iter().map(|s| s.to_string()).collect(),
            col_labels.iter().map(|s| s.to_string()).collect(),
            Matrix::from_rows(rows),
        )
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn counts(&self) -> &Matrix {
        &self.counts
    }

    pub fn grand_total(&self) -> f64 {
        self.grand_total
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    /// The same table with rows and columns swapped.
    pub fn transpose(&self) -> ContingencyTable {
        ContingencyTable {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            counts: self.counts.transpose(),
            grand_total: self.grand_total,
        }
    }

    /// Every cell multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> ContingencyTable {
        let counts = self.counts.map(|x| x * factor);
        let grand_total = counts.sum();
        ContingencyTable {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            counts,
            grand_total,
        }
    }

    /// Certifies the table: at least 2x2, finite non-negative cells, and no
    /// zero row or column total. Returns the table unchanged on success.
    pub fn validate(self) -> Result<Self, TableError> {
        self.check()?;
        Ok(self)
    }

    /// Borrowing form of [`validate`](Self::validate).
    pub fn check(&self) -> Result<(), TableError> {
        let (a, b) = self.counts.shape();
        if a < 2 || b < 2 {
            return Err(TableError::TooSmall { rows: a, cols: b });
        }
        for i in 0..a {
            for j in 0..b {
                let v = self.counts[(i, j)];
                if !v.is_finite() {
                    return Err(TableError::NonFiniteEntry {
                        row: self.row_labels[i].clone(),
                        col: self.col_labels[j].clone(),
                    });
                }
                if v < 0.0 {
                    return Err(TableError::NegativeEntry {
                        row: self.row_labels[i].clone(),
                        col: self.col_labels[j].clone(),
                    });
                }
            }
        }
        if let Some(i) = self.counts.row_sums().iter().position(|&s| s <= 0.0) {
            return Err(TableError::ZeroMargin {
                axis: Axis::Row,
                label: self.row_labels[i].clone(),
            });
        }
        if let Some(j) = self.counts.col_sums().iter().position(|&s| s <= 0.0) {
            return Err(TableError::ZeroMargin {
                axis: Axis::Column,
                label: self.col_labels[j].clone(),
            });
        }
        Ok(())
    }

    /// Serializes in matrix layout with 12 significant digits per cell.
    pub fn to_matrix_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.col_labels.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (label, row) in self.row_labels.iter().zip(self.counts.iter_rows()) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|&v| format_sig12(v)));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn check_distinct(labels: &[String]) -> Result<(), TableError> {
    let mut seen = HashMap::with_capacity(labels.len());
    for l in labels {
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(TableError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn strip_bom(text: &str) -> &str {
    text.strip_prefix('\u{feff}').unwrap_or(text)
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(strip_bom(text).as_bytes())
}

fn csv_err(e: csv::Error) -> TableError {
    TableError::Csv(e.to_string())
}

/// Parses a decimal cell. Plain and scientific notation are accepted;
/// thousands separators, non-finite values and empty cells are not.
pub fn parse_value(text: &str, line: u64) -> Result<f64, TableError> {
    let t = text.trim();
    let bad = |reason| TableError::BadValue {
        line,
        text: text.to_string(),
        reason,
    };
    if t.is_empty() {
        return Err(bad("empty cell"));
    }
    // f64::from_str also takes "inf", "NaN", "infinity"; only digits, sign,
    // point and exponent are allowed through.
    if !t
        .bytes()
        .all(|c| c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E'))
    {
        return Err(bad("not a decimal number"));
    }
    let v: f64 = t.parse().map_err(|_| bad("not a decimal number"))?;
    if !v.is_finite() {
        return Err(bad("out of range"));
    }
    Ok(v)
}

/// Parses long-layout CSV: a header naming `row_field`, `col_field` and
/// `value_field`, then one record per cell contribution.
///
/// Negative values are rejected here with their line number.
pub fn parse_long_csv(
    text: &str,
    row_field: &str,
    col_field: &str,
    value_field: &str,
) -> Result<ContingencyTable, TableError> {
    let mut rdr = reader(text);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h.map_err(csv_err)?,
        None => return Err(TableError::EmptyInput),
    };
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| TableError::MissingField(name.to_string()))
    };
    let (ri, ci, vi) = (find(row_field)?, find(col_field)?, find(value_field)?);
    let needed = ri.max(ci).max(vi) + 1;

    let mut row_labels: Vec<String> = Vec::new();
    let mut col_labels: Vec<String> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();

    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() < needed {
            return Err(TableError::RaggedRow {
                line,
                expected: header.len(),
                found: rec.len(),
            });
        }
        let (r, c) = (rec[ri].trim(), rec[ci].trim());
        if r.is_empty() || c.is_empty() {
            return Err(TableError::EmptyLabel { line });
        }
        let v = parse_value(&rec[vi], line)?;
        if v < 0.0 {
            return Err(TableError::BadValue {
                line,
                text: rec[vi].to_string(),
                reason: "negative value",
            });
        }
        let i = *row_index.entry(r.to_string()).or_insert_with(|| {
            row_labels.push(r.to_string());
            row_labels.len() - 1
        });
        let j = *col_index.entry(c.to_string()).or_insert_with(|| {
            col_labels.push(c.to_string());
            col_labels.len() - 1
        });
        cells.push((i, j, v));
    }
    if cells.is_empty() {
        return Err(TableError::EmptyInput);
    }
    let mut counts = Matrix::zeros(row_labels.len(), col_labels.len());
    for (i, j, v) in cells {
        counts[(i, j)] += v;
    }
    ContingencyTable::new(row_labels, col_labels, counts)
}

/// Parses matrix-layout CSV: column labels in the header (first cell ignored,
/// conventionally blank or `rows`), then `label, v1, ..., vb` per line.
pub fn parse_matrix_csv(text: &str) -> Result<ContingencyTable, TableError> {
    let mut rdr = reader(text);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h.map_err(csv_err)?,
        None => return Err(TableError::EmptyInput),
    };
    let col_labels: Vec<String> = header
        .iter()
        .skip(1)
        .map(|s| s.trim().to_string())
        .collect();
    if col_labels.iter().any(|l| l.is_empty()) {
        return Err(TableError::EmptyLabel {
            line: header.position().map_or(1, |p| p.line()),
        });
    }
    check_distinct(&col_labels)?;
    let width = header.len();

    let mut row_labels = Vec::new();
    let mut data = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() != width {
            return Err(TableError::RaggedRow {
                line,
                expected: width,
                found: rec.len(),
            });
        }
        let label = rec[0].trim();
        if label.is_empty() {
            return Err(TableError::EmptyLabel { line });
        }
        row_labels.push(label.to_string());
        for cell in rec.iter().skip(1) {
            data.push(parse_value(cell, line)?);
        }
    }
    if row_labels.is_empty() {
        return Err(TableError::EmptyInput);
    }
    let counts = Matrix::from_row_major(row_labels.len(), col_labels.len(), data);
    ContingencyTable::new(row_labels, col_labels, counts)
}

/// Formats `v` as decimal text with at most 12 significant digits, trailing
/// zeros trimmed. Very large or small magnitudes use scientific notation.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // Round to 12 significant digits first so the exponent reflects any carry.
    let sci = format!("{:.11e}", v);
    let rounded: f64 = sci.parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor() as i32;
    if !(-6..=15).contains(&exp) {
        let (mant, e) = sci.split_once('e').expect("scientific format");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        return format!("{mant}e{e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, rounded);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
