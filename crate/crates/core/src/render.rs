//! Output emitters: biplot SVG, CSV tables and the markdown report.
//!
//! Every emitter is a pure function of its inputs; identical inputs give
//! byte-identical output.

use std::fmt::Write as _;

use thiserror::Error;

use crate::association::AssociationReport;
use crate::ca::{CorrespondenceModel, Normalization};
use crate::chi::{format_p, ResidualTable};
use crate::table::format_sig12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("bad dimensions ({0}, {1}): need two distinct axes in 1..={2}")]
    BadDims(usize, usize, usize),
    #[error("inputs disagree: {0}")]
    InputMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

/// Two-axis scatter of row and column points.
#[derive(Debug, Clone, PartialEq)]
pub struct BiplotDocument {
    pub normalization: Normalization,
    /// 1-based axis numbers.
    pub dims: (usize, usize),
    pub row_points: Vec<PlotPoint>,
    pub col_points: Vec<PlotPoint>,
    pub axis_captions: [String; 2],
}

/// Builds the biplot for axes `dims` (1-based).
pub fn biplot(
    model: &CorrespondenceModel,
    normalization: Normalization,
    dims: (usize, usize),
) -> Result<BiplotDocument, RenderError> {
    let k = model.n_axes();
    let (d1, d2) = dims;
    if d1 == d2 || d1 == 0 || d2 == 0 || d1 > k || d2 > k {
        return Err(RenderError::BadDims(d1, d2, k));
    }
    let (rows, cols) = model.coordinates(normalization);
    let points = |labels: &[String], m: &crate::matrix::Matrix| {
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| PlotPoint {
                label: l.clone(),
                x: m[(i, d1 - 1)],
                y: m[(i, d2 - 1)],
            })
            .collect()
    };
    let summary = model.inertia_summary();
    let caption = |d: usize| {
        format!(
            "Dimension {} ({:.1}%)",
            d,
            summary[d - 1].proportion * 100.0
        )
    };
    Ok(BiplotDocument {
        normalization,
        dims,
        row_points: points(&model.row_labels, &rows),
        col_points: points(&model.col_labels, &cols),
        axis_captions: [caption(d1), caption(d2)],
    })
}

/// Escapes text for XML content and attribute values.
pub fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // Not representable in XML 1.0.
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push('\u{fffd}'),
            c => out.push(c),
        }
    }
    out
}

const PLOT_SIZE: f64 = 640.0;
const PAD_LEFT: f64 = 60.0;
const PAD_TOP: f64 = 50.0;
const PAD_RIGHT: f64 = 30.0;
const PAD_BOTTOM: f64 = 60.0;
const ROW_COLOR: &str = "#1f77b4";
const COL_COLOR: &str = "#d62728";

/// Renders the document as a standalone SVG 1.1 file.
///
/// Rows are circles, columns are triangles (`path`), each with a text label.
/// Both axes share one scale so distances read correctly.
pub fn emit_svg(doc: &BiplotDocument) -> String {
    let all = doc.row_points.iter().chain(&doc.col_points);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for p in all {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let mut span = (xmax - xmin).max(ymax - ymin);
    // Also catches NaN.
    if !(span.is_finite() && span > 0.0) {
        span = 1.0;
    }
    let extent = span * 1.2;
    let x0 = (xmin + xmax) / 2.0 - extent / 2.0;
    let y1 = (ymin + ymax) / 2.0 + extent / 2.0;
    let scale = PLOT_SIZE / extent;
    let px = |x: f64| PAD_LEFT + (x - x0) * scale;
    let py = |y: f64| PAD_TOP + (y1 - y) * scale;

    let width = PAD_LEFT + PLOT_SIZE + PAD_RIGHT;
    let height = PAD_TOP + PLOT_SIZE + PAD_BOTTOM;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="11">"#,
        w = width,
        h = height
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text class="title" x="{:.2}" y="30" text-anchor="middle" font-size="14">Row and column points ({} normalization)</text>"#,
        PAD_LEFT + PLOT_SIZE / 2.0,
        doc.normalization
    );
    let _ = writeln!(
        s,
        r##"<rect x="{PAD_LEFT:.0}" y="{PAD_TOP:.0}" width="{PLOT_SIZE:.0}" height="{PLOT_SIZE:.0}" fill="none" stroke="#999999"/>"##
    );
    let (ox, oy) = (px(0.0), py(0.0));
    let _ = writeln!(
        s,
        r##"<g id="crosshair" stroke="#bbbbbb" stroke-dasharray="4 3">"##
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}"/>"#,
        PAD_LEFT,
        PAD_LEFT + PLOT_SIZE
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ox:.2}" y1="{:.2}" x2="{ox:.2}" y2="{:.2}"/>"#,
        PAD_TOP,
        PAD_TOP + PLOT_SIZE
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="row-points" fill="{ROW_COLOR}">"#);
    for p in &doc.row_points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5"/>"#,
            px(p.x),
            py(p.y)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="column-points" fill="{COL_COLOR}">"#);
    for p in &doc.col_points {
        let (x, y) = (px(p.x), py(p.y));
        let _ = writeln!(
            s,
            r#"<path d="M {:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z"/>"#,
            x,
            y - 5.0,
            x + 4.5,
            y + 3.5,
            x - 4.5,
            y + 3.5
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="labels">"#);
    for (points, color) in [(&doc.row_points, ROW_COLOR), (&doc.col_points, COL_COLOR)] {
        for p in points {
            let _ = writeln!(
                s,
                r#"<text class="point-label" x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
                px(p.x) + 6.0,
                py(p.y) - 4.0,
                xml_escape(&p.label)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r#"<text class="axis-caption" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        PAD_LEFT + PLOT_SIZE / 2.0,
        PAD_TOP + PLOT_SIZE + 40.0,
        xml_escape(&doc.axis_captions[0])
    );
    let (cx, cy) = (20.0, PAD_TOP + PLOT_SIZE / 2.0);
    let _ = writeln!(
        s,
        r#"<text class="axis-caption" x="{cx:.2}" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{}</text>"#,
        xml_escape(&doc.axis_captions[1])
    );
    let _ = writeln!(s, "</svg>");
    s
}

fn write_csv(records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// `kind,label,mass,distance,dim1..dimK` for every row then every column.
pub fn coordinates_csv(model: &CorrespondenceModel, normalization: Normalization) -> String {
    let (rows, cols) = model.coordinates(normalization);
    let k = model.n_axes();
    let mut header = vec![
        "kind".to_string(),
        "label".to_string(),
        "mass".to_string(),
        "distance".to_string(),
    ];
    header.extend((1..=k).map(|d| format!("dim{d}")));
    let mut recs = vec![header];
    let sets = [
        (
            "row",
            &model.row_labels,
            &model.row_masses,
            &model.row_distances,
            &rows,
        ),
        (
            "column",
            &model.col_labels,
            &model.col_masses,
            &model.col_distances,
            &cols,
        ),
    ];
    for (kind, labels, masses, dists, coords) in sets {
        for (i, label) in labels.iter().enumerate() {
            let mut r = vec![
                kind.to_string(),
                label.clone(),
                format_sig12(masses[i]),
                format_sig12(dists[i]),
            ];
            r.extend((0..k).map(|a| format_sig12(coords[(i, a)])));
            recs.push(r);
        }
    }
    write_csv(recs)
}

/// `dimension,singular_value,inertia,proportion,cumulative`.
pub fn summary_csv(model: &CorrespondenceModel) -> String {
    let mut recs = vec![[
        "dimension",
        "singular_value",
        "inertia",
        "proportion",
        "cumulative",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect::<Vec<_>>()];
    for r in model.inertia_summary() {
        recs.push(vec![
            r.dimension.to_string(),
            format_sig12(r.singular_value),
            format_sig12(r.inertia),
            format_sig12(r.proportion),
            format_sig12(r.cumulative),
        ]);
    }
    write_csv(recs)
}

/// Signed chi-square cells in matrix layout.
pub fn residuals_csv(residuals: &ResidualTable) -> String {
    let mut header = vec![String::new()];
    header.extend(residuals.col_labels.iter().cloned());
    let mut recs = vec![header];
    for (label, row) in residuals
        .row_labels
        .iter()
        .zip(residuals.signed_cells.iter_rows())
    {
        let mut r = vec![label.clone()];
        r.extend(row.iter().map(|&v| format_sig12(v)));
        recs.push(r);
    }
    write_csv(recs)
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Markdown analysis report: dimension summary, test line, associations and
/// the signed residual matrix. `display_dims` truncates the summary table.
pub fn emit_report(
    model: &CorrespondenceModel,
    residuals: &ResidualTable,
    associations: &AssociationReport,
    display_dims: Option<usize>,
) -> Result<String, RenderError> {
    if model.row_labels != residuals.row_labels || model.col_labels != residuals.col_labels {
        return Err(RenderError::InputMismatch(
            "model and residual labels differ".into(),
        ));
    }
    let assoc_rows: Vec<&String> = associations.rows.iter().map(|r| &r.row_label).collect();
    if assoc_rows.len() != residuals.row_labels.len()
        || assoc_rows
            .iter()
            .zip(&residuals.row_labels)
            .any(|(a, b)| *a != b)
        || associations.col_labels != residuals.col_labels
    {
        return Err(RenderError::InputMismatch(
            "association and residual labels differ".into(),
        ));
    }

    let mut s = String::new();
    let _ = writeln!(s, "# Correspondence analysis report\n");
    let _ = writeln!(
        s,
        "Table: {} rows x {} columns, grand total {}.\n",
        model.row_labels.len(),
        model.col_labels.len(),
        format_sig12(model.grand_total)
    );

    let summary = model.inertia_summary();
    let shown = display_dims.map_or(summary.len(), |d| d.min(summary.len()));
    let _ = writeln!(s, "## Summary of the main statistical results\n");
    let _ = writeln!(s, "```text");
    let _ = writeln!(
        s,
        "{:<3}  {:<5}  {:<5}  {:<5}  Cum",
        "Dim", "SV", "Inert", "Prop"
    );
    for r in &summary[..shown] {
        let _ = writeln!(
            s,
            "{:<3}  {:.3}  {:.3}  {:.3}  {:.3}",
            r.dimension, r.singular_value, r.inertia, r.proportion, r.cumulative
        );
    }
    let _ = writeln!(s, "```\n");
    let _ = writeln!(
        s,
        "Dim = dimension, SV = singular value, Inert = principal inertia, \
         Prop = proportion of inertia accounted for, Cum = cumulative proportion."
    );
    if shown < summary.len() {
        let _ = writeln!(s, "Showing {} of {} dimensions.", shown, summary.len());
    }
    let _ = writeln!(s, "Total inertia: {:.6}.\n", model.total_inertia);
    let _ = writeln!(
        s,
        "Chi-square = {:.3} ; p-value = {}\n",
        residuals.statistic,
        format_p(residuals.p_value)
    );
    let _ = writeln!(s, "Degrees of freedom = {}\n", residuals.df);

    let _ = writeln!(s, "## Associations\n");
    let _ = writeln!(s, "```text");
    s.push_str(&associations.to_text());
    let _ = writeln!(s, "```\n");

    let _ = writeln!(s, "## Signed chi-square residuals\n");
    let _ = write!(s, "|  |");
    for c in &residuals.col_labels {
        let _ = write!(s, " {} |", md_cell(c));
    }
    let _ = writeln!(s);
    let _ = write!(s, "|---|");
    for _ in &residuals.col_labels {
        let _ = write!(s, "---:|");
    }
    let _ = writeln!(s);
    for (label, row) in residuals
        .row_labels
        .iter()
        .zip(residuals.signed_cells.iter_rows())
    {
        let _ = write!(s, "| {} |", md_cell(label));
        for v in row {
            let _ = write!(s, " {:.2} |", v);
        }
        let _ = writeln!(s);
    }
    Ok(s)
}
