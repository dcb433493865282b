//! Correspondence analysis of two-way contingency tables.
//!
//! The pipeline is: ingest a labeled table ([`table`]), fit the
//! chi-square-scaled SVD ([`ca`], backed by [`svd`]), compute signed
//! chi-square residuals and the test of independence ([`chi`]), read off per-row
//! associations ([`association`]) and emit a biplot, CSV tables and a report
//! ([`render`]). The `ca` binary wires these together ([`cli`]).
//!
//! ```
//! use ca_core::{ca, chi, table};
//!
//! let t = table::parse_matrix_csv(",x,y\nA,10,0\nB,0,10").unwrap().validate().unwrap();
//! let model = ca::fit(&t).unwrap();
//! let res = chi::residuals(&t).unwrap();
//! assert!((model.total_inertia * t.grand_total() - res.statistic).abs() < 1e-9);
//! ```

pub mod association;
pub mod ca;
pub mod chi;
pub mod cli;
pub mod matrix;
pub mod render;
pub mod svd;
pub mod table;

pub use association::{extract, flag_positive_only, AssociationReport};
pub use ca::{fit, CorrespondenceModel, FitError, InertiaRecord, Normalization};
pub use chi::{chi_square_upper_tail, format_p, residuals, ResidualTable};
pub use matrix::Matrix;
pub use render::{biplot, emit_report, emit_svg, BiplotDocument};
pub use svd::{svd, SvdResult};
pub use table::{parse_long_csv, parse_matrix_csv, ContingencyTable, TableError};
