/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CA_FFI_H
#define CA_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CaNormalization {
  CA_NORMALIZATION_PRINCIPAL = 0,
  CA_NORMALIZATION_STANDARD = 1,
  CA_NORMALIZATION_SYMMETRIC = 2,
} CaNormalization;

// Result code of every fallible call.
typedef enum CaStatus {
  CA_STATUS_OK = 0,
  CA_STATUS_NULL_ARGUMENT = 1,
  CA_STATUS_INVALID_UTF8 = 2,
  // Malformed CSV or value.
  CA_STATUS_PARSE = 3,
  // Well-formed but unusable table: negative or non-finite cell, zero
  // margin, fewer than two rows or columns.
  CA_STATUS_INVALID_TABLE = 4,
  // SVD did not converge or the trivial axis was not found.
  CA_STATUS_NUMERIC = 5,
  // Axis indices out of range or equal.
  CA_STATUS_BAD_DIMS = 6,
  // The caller's buffer is shorter than required; nothing was written.
  CA_STATUS_BUFFER_TOO_SMALL = 7,
  // A Rust panic was caught at the boundary.
  CA_STATUS_INTERNAL = 8,
} CaStatus;

// A fitted correspondence analysis.
typedef struct CaModel CaModel;

// Signed chi-square residuals and the independence test.
typedef struct CaResiduals CaResiduals;

// A validated contingency table.
typedef struct CaTable CaTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or "" after a success.
// The pointer stays valid until the next call into this library on the same
// thread.
const char *ca_last_error_message(void);

// Parses a matrix-layout CSV (first row column labels, first column row
// labels, corner cell ignored) and validates it.
//
// # Safety
// `csv` must be a NUL-terminated string; `out` must be writable.
enum CaStatus ca_table_from_matrix_csv(const char *csv, struct CaTable **out);

// Parses a long-layout CSV with the named row, column and value fields.
// Repeated (row, column) pairs are summed.
//
// # Safety
// All string arguments must be NUL-terminated; `out` must be writable.
enum CaStatus ca_table_from_long_csv(const char *csv,
                                     const char *row_field,
                                     const char *col_field,
                                     const char *value_field,
                                     struct CaTable **out);

// Builds a table from `rows * cols` row-major counts and label arrays.
//
// # Safety
// `counts` must hold `rows * cols` values; the label arrays must hold `rows`
// and `cols` NUL-terminated strings; `out` must be writable.
enum CaStatus ca_table_from_counts(const double *counts,
                                   size_t rows,
                                   size_t cols,
                                   const char *const *row_labels,
                                   const char *const *col_labels,
                                   struct CaTable **out);

// # Safety
// `table` must be null or a handle from this library, not yet freed.
void ca_table_free(struct CaTable *table);

// # Safety
// `table` must be a live handle; `rows` and `cols` must be writable.
enum CaStatus ca_table_shape(const struct CaTable *table, size_t *rows, size_t *cols);

// # Safety
// `table` must be a live handle; `out` must be writable.
enum CaStatus ca_fit(const struct CaTable *table, struct CaModel **out);

// # Safety
// `model` must be null or a live handle.
void ca_model_free(struct CaModel *model);

// Number of non-trivial axes, `min(rows, cols) - 1`. Returns 0 for null.
//
// # Safety
// `model` must be null or a live handle.
size_t ca_model_n_axes(const struct CaModel *model);

// # Safety
// `model` must be a live handle; `out` must be writable.
enum CaStatus ca_model_total_inertia(const struct CaModel *model, double *out);

// Copies the `n_axes` singular values, largest first.
//
// # Safety
// `model` must be a live handle; `buf` must hold `len` values.
enum CaStatus ca_model_singular_values(const struct CaModel *model, double *buf, size_t len);

// Copies row (`rows x n_axes`) and column (`cols x n_axes`) coordinates,
// row-major, under the given normalization.
//
// # Safety
// `model` must be a live handle; each buffer must hold its stated length.
enum CaStatus ca_model_coordinates(const struct CaModel *model,
                                   enum CaNormalization normalization,
                                   double *row_buf,
                                   size_t row_len,
                                   double *col_buf,
                                   size_t col_len);

// SVG biplot of axes `dim_x` and `dim_y` (1-based). Free the string with
// [`ca_string_free`].
//
// # Safety
// `model` must be a live handle; `out` must be writable.
enum CaStatus ca_model_biplot_svg(const struct CaModel *model,
                                  enum CaNormalization normalization,
                                  size_t dim_x,
                                  size_t dim_y,
                                  char **out);

// # Safety
// `table` must be a live handle; `out` must be writable.
enum CaStatus ca_residuals(const struct CaTable *table, struct CaResiduals **out);

// # Safety
// `res` must be null or a live handle.
void ca_residuals_free(struct CaResiduals *res);

// Chi-square statistic, degrees of freedom and upper-tail p-value. Any of
// the output pointers may be null to skip it.
//
// # Safety
// `res` must be a live handle; non-null outputs must be writable.
enum CaStatus ca_residuals_test(const struct CaResiduals *res,
                                double *statistic,
                                size_t *df,
                                double *p_value);

// Copies the signed chi-square cells, row-major (`rows x cols`).
//
// # Safety
// `res` must be a live handle; `buf` must hold `len` values.
enum CaStatus ca_residuals_signed_cells(const struct CaResiduals *res, double *buf, size_t len);

// Full markdown report for a table. `display_dims` caps the rows of the
// dimension summary; 0 shows all. Free the string with [`ca_string_free`].
//
// # Safety
// `table` must be a live handle; `out` must be writable.
enum CaStatus ca_report(const struct CaTable *table, size_t display_dims, char **out);

// Frees a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library, not yet freed.
void ca_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CA_FFI_H */
