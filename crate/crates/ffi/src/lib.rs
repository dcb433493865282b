//! C ABI over `ca-core`.
//!
//! Handles are opaque and owned by the caller once returned; free each with
//! its matching `*_free`. Every fallible call returns a [`CaStatus`]; on
//! anything but `CA_STATUS_OK` a message is available from
//! [`ca_last_error_message`] on the same thread. Matrices cross the boundary
//! row-major into caller-provided buffers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ca_core::chi::ChiError;
use ca_core::render::RenderError;
use ca_core::{
    biplot, emit_report, emit_svg, extract, fit, flag_positive_only, parse_long_csv,
    parse_matrix_csv, residuals, ContingencyTable, CorrespondenceModel, FitError, Matrix,
    Normalization, ResidualTable,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed CSV or value.
    Parse = 3,
    /// Well-formed but unusable table: negative or non-finite cell, zero
    /// margin, fewer than two rows or columns.
    InvalidTable = 4,
    /// SVD did not converge or the trivial axis was not found.
    Numeric = 5,
    /// Axis indices out of range or equal.
    BadDims = 6,
    /// The caller's buffer is shorter than required; nothing was written.
    BufferTooSmall = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaNormalization {
    Principal = 0,
    Standard = 1,
    Symmetric = 2,
}

impl From<CaNormalization> for Normalization {
    fn from(n: CaNormalization) -> Self {
        match n {
            CaNormalization::Principal => Normalization::Principal,
            CaNormalization::Standard => Normalization::Standard,
            CaNormalization::Symmetric => Normalization::Symmetric,
        }
    }
}

/// A validated contingency table.
pub struct CaTable(ContingencyTable);

/// A fitted correspondence analysis.
pub struct CaModel(CorrespondenceModel);

/// Signed chi-square residuals and the independence test.
pub struct CaResiduals(ResidualTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(CaStatus, String);

impl From<FitError> for Failure {
    fn from(e: FitError) -> Self {
        let code = match e {
            FitError::Table(_) => CaStatus::InvalidTable,
            _ => CaStatus::Numeric,
        };
        Failure(code, e.to_string())
    }
}

impl From<ChiError> for Failure {
    fn from(e: ChiError) -> Self {
        let code = match e {
            ChiError::Table(_) => CaStatus::InvalidTable,
            _ => CaStatus::Numeric,
        };
        Failure(code, e.to_string())
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        let code = match e {
            RenderError::BadDims(..) => CaStatus::BadDims,
            RenderError::InputMismatch(_) => CaStatus::Numeric,
        };
        Failure(code, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    // Interior NULs would truncate the C string; replace them.
    let c = CString::new(msg.replace('\0', "\u{fffd}")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, records any failure, and converts panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CaStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let (status, msg) = match outcome {
        Ok(Ok(())) => (CaStatus::Ok, String::new()),
        Ok(Err(Failure(s, m))) => (s, m),
        Err(p) => {
            let what = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            (CaStatus::Internal, format!("internal error: {what}"))
        }
    };
    set_last_error(&msg);
    status
}

fn null(what: &str) -> Failure {
    Failure(CaStatus::NullArgument, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CaStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn out_slice<'a>(
    buf: *mut f64,
    len: usize,
    need: usize,
    what: &str,
) -> Result<&'a mut [f64], Failure> {
    if len < need {
        return Err(Failure(
            CaStatus::BufferTooSmall,
            format!("{what}: buffer holds {len} values, {need} needed"),
        ));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if buf.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(buf, need))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "\u{fffd}"))
        .unwrap_or_default()
        .into_raw()
}

fn load(parsed: Result<ContingencyTable, ca_core::TableError>) -> Result<CaTable, Failure> {
    let t = parsed.map_err(|e| Failure(CaStatus::Parse, e.to_string()))?;
    t.validate()
        .map(CaTable)
        .map_err(|e| Failure(CaStatus::InvalidTable, e.to_string()))
}

/// Message for the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn ca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a matrix-layout CSV (first row column labels, first column row
/// labels, corner cell ignored) and validates it.
///
/// # Safety
/// `csv` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_table_from_matrix_csv(
    csv: *const c_char,
    out: *mut *mut CaTable,
) -> CaStatus {
    guard(|| {
        let t = load(parse_matrix_csv(text(csv, "csv")?))?;
        put(out, t)
    })
}

/// Parses a long-layout CSV with the named row, column and value fields.
/// Repeated (row, column) pairs are summed.
///
/// # Safety
/// All string arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_table_from_long_csv(
    csv: *const c_char,
    row_field: *const c_char,
    col_field: *const c_char,
    value_field: *const c_char,
    out: *mut *mut CaTable,
) -> CaStatus {
    guard(|| {
        let parsed = parse_long_csv(
            text(csv, "csv")?,
            text(row_field, "row_field")?,
            text(col_field, "col_field")?,
            text(value_field, "value_field")?,
        );
        put(out, load(parsed)?)
    })
}

/// Builds a table from `rows * cols` row-major counts and label arrays.
///
/// # Safety
/// `counts` must hold `rows * cols` values; the label arrays must hold `rows`
/// and `cols` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_table_from_counts(
    counts: *const f64,
    rows: usize,
    cols: usize,
    row_labels: *const *const c_char,
    col_labels: *const *const c_char,
    out: *mut *mut CaTable,
) -> CaStatus {
    guard(|| {
        if counts.is_null() || row_labels.is_null() || col_labels.is_null() {
            return Err(null("counts or labels"));
        }
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| Failure(CaStatus::InvalidTable, "table too large".into()))?;
        let data = std::slice::from_raw_parts(counts, n).to_vec();
        let labels =
            |p: *const *const c_char, k: usize, what: &str| -> Result<Vec<String>, Failure> {
                (0..k)
                    .map(|i| text(*p.add(i), what).map(str::to_owned))
                    .collect()
            };
        let t = ContingencyTable::new(
            labels(row_labels, rows, "row label")?,
            labels(col_labels, cols, "column label")?,
            Matrix::from_row_major(rows, cols, data),
        );
        put(out, load(t)?)
    })
}

/// # Safety
/// `table` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ca_table_free(table: *mut CaTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_table_shape(
    table: *const CaTable,
    rows: *mut usize,
    cols: *mut usize,
) -> CaStatus {
    guard(|| {
        let t = borrow(table, "table")?;
        if rows.is_null() || cols.is_null() {
            return Err(null("rows or cols"));
        }
        *rows = t.0.n_rows();
        *cols = t.0.n_cols();
        Ok(())
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_fit(table: *const CaTable, out: *mut *mut CaModel) -> CaStatus {
    guard(|| {
        let m = fit(&borrow(table, "table")?.0)?;
        put(out, CaModel(m))
    })
}

/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ca_model_free(model: *mut CaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of non-trivial axes, `min(rows, cols) - 1`. Returns 0 for null.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ca_model_n_axes(model: *const CaModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.n_axes())
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_model_total_inertia(model: *const CaModel, out: *mut f64) -> CaStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.0.total_inertia;
        Ok(())
    })
}

/// Copies the `n_axes` singular values, largest first.
///
/// # Safety
/// `model` must be a live handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ca_model_singular_values(
    model: *const CaModel,
    buf: *mut f64,
    len: usize,
) -> CaStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let sv = &m.0.singular_values;
        out_slice(buf, len, sv.len(), "singular values")?.copy_from_slice(sv);
        Ok(())
    })
}

/// Copies row (`rows x n_axes`) and column (`cols x n_axes`) coordinates,
/// row-major, under the given normalization.
///
/// # Safety
/// `model` must be a live handle; each buffer must hold its stated length.
#[no_mangle]
pub unsafe extern "C" fn ca_model_coordinates(
    model: *const CaModel,
    normalization: CaNormalization,
    row_buf: *mut f64,
    row_len: usize,
    col_buf: *mut f64,
    col_len: usize,
) -> CaStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let (rows, cols) = m.0.coordinates(normalization.into());
        let r = out_slice(row_buf, row_len, rows.as_slice().len(), "row coordinates")?;
        let c = out_slice(
            col_buf,
            col_len,
            cols.as_slice().len(),
            "column coordinates",
        )?;
        r.copy_from_slice(rows.as_slice());
        c.copy_from_slice(cols.as_slice());
        Ok(())
    })
}

/// SVG biplot of axes `dim_x` and `dim_y` (1-based). Free the string with
/// [`ca_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_model_biplot_svg(
    model: *const CaModel,
    normalization: CaNormalization,
    dim_x: usize,
    dim_y: usize,
    out: *mut *mut c_char,
) -> CaStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = biplot(&m.0, normalization.into(), (dim_x, dim_y))?;
        *out = owned_string(emit_svg(&doc));
        Ok(())
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_residuals(
    table: *const CaTable,
    out: *mut *mut CaResiduals,
) -> CaStatus {
    guard(|| {
        let r = residuals(&borrow(table, "table")?.0)?;
        put(out, CaResiduals(r))
    })
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ca_residuals_free(res: *mut CaResiduals) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Chi-square statistic, degrees of freedom and upper-tail p-value. Any of
/// the output pointers may be null to skip it.
///
/// # Safety
/// `res` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_residuals_test(
    res: *const CaResiduals,
    statistic: *mut f64,
    df: *mut usize,
    p_value: *mut f64,
) -> CaStatus {
    guard(|| {
        let r = &borrow(res, "residuals")?.0;
        if !statistic.is_null() {
            *statistic = r.statistic;
        }
        if !df.is_null() {
            *df = r.df;
        }
        if !p_value.is_null() {
            *p_value = r.p_value;
        }
        Ok(())
    })
}

/// Copies the signed chi-square cells, row-major (`rows x cols`).
///
/// # Safety
/// `res` must be a live handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ca_residuals_signed_cells(
    res: *const CaResiduals,
    buf: *mut f64,
    len: usize,
) -> CaStatus {
    guard(|| {
        let cells = borrow(res, "residuals")?.0.signed_cells.as_slice();
        out_slice(buf, len, cells.len(), "signed cells")?.copy_from_slice(cells);
        Ok(())
    })
}

/// Full markdown report for a table. `display_dims` caps the rows of the
/// dimension summary; 0 shows all. Free the string with [`ca_string_free`].
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_report(
    table: *const CaTable,
    display_dims: usize,
    out: *mut *mut c_char,
) -> CaStatus {
    guard(|| {
        let t = &borrow(table, "table")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = fit(t)?;
        let r = residuals(t)?;
        let assoc = flag_positive_only(extract(&r));
        let cap = (display_dims > 0).then_some(display_dims);
        *out = owned_string(emit_report(&m, &r, &assoc, cap)?);
        Ok(())
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
