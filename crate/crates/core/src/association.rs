//! Per-row strongest and weakest associations read off the signed chi-square
//! cells.
//!
//! For each row, the column(s) holding the largest signed cell are its
//! strongest association and the column(s) holding the smallest are its
//! weakest. Ties are kept in full, in column order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::chi::ResidualTable;
use crate::matrix::Matrix;

/// One selected cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedCell {
    pub col_label: String,
    pub value: f64,
}

/// The extreme cells of a row in one direction.
#[derive(Debug, Clone, PartialEq)]
pub enum Extreme {
    /// Tied extreme cells, in column order; never empty.
    Cells(Vec<AssociatedCell>),
    /// The extreme does not have the required sign (set by
    /// [`flag_positive_only`]).
    NoneOfSign,
}

impl Extreme {
    pub fn cells(&self) -> &[AssociatedCell] {
        match self {
            Extreme::Cells(c) => c,
            Extreme::NoneOfSign => &[],
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.cells().first().map(|c| c.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowAssociation {
    pub row_label: String,
    pub strongest: Extreme,
    pub weakest: Extreme,
}

/// Per-row extremes plus the inverted column → rows index.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationReport {
    pub col_labels: Vec<String>,
    pub rows: Vec<RowAssociation>,
    /// For each column (in column order), the rows whose strongest cell is
    /// in that column.
    pub strongest_by_column: Vec<(String, Vec<String>)>,
    /// Same for weakest cells.
    pub weakest_by_column: Vec<(String, Vec<String>)>,
}

impl AssociationReport {
    fn from_rows(col_labels: Vec<String>, rows: Vec<RowAssociation>) -> Self {
        let index = |pick: fn(&RowAssociation) -> &Extreme| {
            col_labels
                .iter()
                .map(|col| {
                    let members = rows
                        .iter()
                        .filter(|r| pick(r).cells().iter().any(|c| &c.col_label == col))
                        .map(|r| r.row_label.clone())
                        .collect();
                    (col.clone(), members)
                })
                .collect()
        };
        let strongest_by_column = index(|r| &r.strongest);
        let weakest_by_column = index(|r| &r.weakest);
        AssociationReport {
            col_labels,
            rows,
            strongest_by_column,
            weakest_by_column,
        }
    }

    /// CSV with one line per row:
    /// `row_label,strongest_cols,strongest_value,weakest_cols,weakest_value`.
    ///
    /// Tied columns are joined with `;` (with `\` escaping). Values use the
    /// shortest exact decimal form; a flagged extreme has empty fields.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "row_label",
            "strongest_cols",
            "strongest_value",
            "weakest_cols",
            "weakest_value",
        ])
        .expect("in-memory write");
        for r in &self.rows {
            let (sc, sv) = extreme_fields(&r.strongest);
            let (wc, wv) = extreme_fields(&r.weakest);
            w.write_record([r.row_label.as_str(), &sc, &sv, &wc, &wv])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// Column → comma-joined rows, in the layout of a "highly associated" /
    /// "less associated" pair of tables. Columns with no rows are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let section = |out: &mut String, title: &str, index: &[(String, Vec<String>)]| {
            let _ = writeln!(out, "{title}");
            let width = index
                .iter()
                .map(|(c, _)| c.chars().count())
                .max()
                .unwrap_or(0);
            for (col, rows) in index.iter().filter(|(_, r)| !r.is_empty()) {
                let _ = writeln!(out, "  {col:<width$}  {}", rows.join(", "));
            }
        };
        section(
            &mut out,
            "Highly associated rows by column:",
            &self.strongest_by_column,
        );
        out.push('\n');
        section(
            &mut out,
            "Less associated rows by column:",
            &self.weakest_by_column,
        );
        let none_pos: Vec<&str> = self
            .rows
            .iter()
            .filter(|r| r.strongest == Extreme::NoneOfSign)
            .map(|r| r.row_label.as_str())
            .collect();
        if !none_pos.is_empty() {
            let _ = writeln!(out, "\nNo positive association: {}", none_pos.join(", "));
        }
        let none_neg: Vec<&str> = self
            .rows
            .iter()
            .filter(|r| r.weakest == Extreme::NoneOfSign)
            .map(|r| r.row_label.as_str())
            .collect();
        if !none_neg.is_empty() {
            let _ = writeln!(out, "No negative association: {}", none_neg.join(", "));
        }
        out
    }
}

fn extreme_fields(e: &Extreme) -> (String, String) {
    match e {
        Extreme::NoneOfSign => (String::new(), String::new()),
        Extreme::Cells(cells) => (
            cells
                .iter()
                .map(|c| escape_label(&c.col_label))
                .collect::<Vec<_>>()
                .join(";"),
            format!("{}", cells[0].value),
        ),
    }
}

fn escape_label(s: &str) -> String {
    s.replace('\\', "\\\\").replace(';', "\\;")
}

fn split_labels(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        match ch {
            '\\' => {
                if let Some(next) = chars.next() {
                    cur.push(next);
                }
            }
            ';' => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssociationParseError {
    #[error("csv: {0}")]
    Csv(String),
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
}

/// Parses the output of [`AssociationReport::to_csv`]. `col_labels` gives the
/// column order for the rebuilt index.
pub fn parse_csv(
    text: &str,
    col_labels: &[String],
) -> Result<AssociationReport, AssociationParseError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| AssociationParseError::Csv(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 5 {
            return Err(AssociationParseError::Malformed {
                line,
                msg: format!("expected 5 fields, found {}", rec.len()),
            });
        }
        let parse_extreme = |cols: &str, val: &str| -> Result<Extreme, AssociationParseError> {
            if cols.is_empty() && val.is_empty() {
                return Ok(Extreme::NoneOfSign);
            }
            let value: f64 = val.parse().map_err(|_| AssociationParseError::Malformed {
                line,
                msg: format!("bad value `{val}`"),
            })?;
            Ok(Extreme::Cells(
                split_labels(cols)
                    .into_iter()
                    .map(|col_label| AssociatedCell { col_label, value })
                    .collect(),
            ))
        };
        rows.push(RowAssociation {
            row_label: rec[0].to_string(),
            strongest: parse_extreme(&rec[1], &rec[2])?,
            weakest: parse_extreme(&rec[3], &rec[4])?,
        });
    }
    Ok(AssociationReport::from_rows(col_labels.to_vec(), rows))
}

/// Extracts per-row extremes from a residual table.
pub fn extract(residuals: &ResidualTable) -> AssociationReport {
    extract_cells(
        &residuals.row_labels,
        &residuals.col_labels,
        &residuals.signed_cells,
    )
}

/// Extracts per-row extremes from any labeled matrix of signed cells.
pub fn extract_cells(
    row_labels: &[String],
    col_labels: &[String],
    signed_cells: &Matrix,
) -> AssociationReport {
    let rows = row_labels
        .iter()
        .zip(signed_cells.iter_rows())
        .map(|(label, cells)| {
            let max = cells.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = cells.iter().copied().fold(f64::INFINITY, f64::min);
            let pick = |target: f64| {
                Extreme::Cells(
                    cells
                        .iter()
                        .zip(col_labels)
                        .filter(|(&v, _)| v == target)
                        .map(|(&value, col)| AssociatedCell {
                            col_label: col.clone(),
                            value,
                        })
                        .collect(),
                )
            };
            RowAssociation {
                row_label: label.clone(),
                strongest: pick(max),
                weakest: pick(min),
            }
        })
        .collect();
    AssociationReport::from_rows(col_labels.to_vec(), rows)
}

/// Drops strongest extremes that are not positive and weakest extremes that
/// are not negative, marking them [`Extreme::NoneOfSign`].
pub fn flag_positive_only(report: AssociationReport) -> AssociationReport {
    let rows = report
        .rows
        .into_iter()
        .map(|mut r| {
            if r.strongest.value().is_some_and(|v| v <= 0.0) {
                r.strongest = Extreme::NoneOfSign;
            }
            if r.weakest.value().is_some_and(|v| v >= 0.0) {
                r.weakest = Extreme::NoneOfSign;
            }
            r
        })
        .collect();
    AssociationReport::from_rows(report.col_labels, rows)
}
