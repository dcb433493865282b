//! Correspondence analysis of a validated contingency table.
//!
//! The scaled matrix is built uncentered, `A = Dr^-1/2 P Dc^-1/2`, so its
//! leading singular triple is the trivial axis `(sqrt(r), 1, sqrt(c))`. That
//! axis is detected, checked and dropped; the remaining `K = min(a, b) - 1`
//! axes carry the association structure.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::svd::{svd, SvdError};
use crate::table::{ContingencyTable, TableError};

/// How far the leading singular value of the uncentered matrix may stray
/// from 1 before the fit is rejected.
pub const TRIVIAL_AXIS_TOL: f64 = 1e-8;

/// Axes whose singular value is at or below this are null: their direction is
/// not determined by the data, so their standard coordinates are zero.
pub const NULL_AXIS_TOL: f64 = 1e-12;

/// Per-entry tolerance when matching the trivial singular vectors against
/// `sqrt(r)` and `sqrt(c)`.
pub const TRIVIAL_VECTOR_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Svd(#[from] SvdError),
    #[error("trivial axis missing: leading singular value {leading} (deviation {deviation:e})")]
    TrivialAxisMissing { leading: f64, deviation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// Standard coordinates scaled by the singular value.
    Principal,
    /// Unit-inertia coordinates.
    Standard,
    /// Standard coordinates scaled by the square root of the singular value.
    #[default]
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown normalization `{0}` (expected principal, standard or symmetric)")]
pub struct UnknownNormalization(pub String);

impl FromStr for Normalization {
    type Err = UnknownNormalization;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "principal" => Ok(Normalization::Principal),
            "standard" => Ok(Normalization::Standard),
            "symmetric" | "symmetrical" => Ok(Normalization::Symmetric),
            _ => Err(UnknownNormalization(s.to_string())),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Principal => "principal",
            Normalization::Standard => "standard",
            Normalization::Symmetric => "symmetric",
        })
    }
}

/// A fitted correspondence analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceModel {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub grand_total: f64,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    /// Non-trivial singular values, descending.
    pub singular_values: Vec<f64>,
    /// Squared singular values.
    pub principal_inertias: Vec<f64>,
    pub row_std: Matrix,
    pub col_std: Matrix,
    pub row_principal: Matrix,
    pub col_principal: Matrix,
    /// Chi-square distance of each row profile from the average profile.
    pub row_distances: Vec<f64>,
    pub col_distances: Vec<f64>,
    pub total_inertia: f64,
}

impl CorrespondenceModel {
    /// Number of retained (non-trivial) axes.
    pub fn n_axes(&self) -> usize {
        self.singular_values.len()
    }

    /// Row and column coordinates under `normalization`.
    pub fn coordinates(&self, normalization: Normalization) -> (Matrix, Matrix) {
        match normalization {
            Normalization::Principal => (self.row_principal.clone(), self.col_principal.clone()),
            Normalization::Standard => (self.row_std.clone(), self.col_std.clone()),
            Normalization::Symmetric => {
                let roots: Vec<f64> = self.singular_values.iter().map(|s| s.sqrt()).collect();
                (
                    scale_columns(&self.row_std, &roots),
                    scale_columns(&self.col_std, &roots),
                )
            }
        }
    }

    /// One record per retained axis.
    ///
    /// When the total inertia is zero (independent table) every proportion is
    /// reported as 0.
    pub fn inertia_summary(&self) -> Vec<InertiaRecord> {
        let mut cumulative = 0.0;
        self.singular_values
            .iter()
            .zip(&self.principal_inertias)
            .enumerate()
            .map(|(k, (&sv, &inertia))| {
                let proportion = if self.total_inertia > 0.0 {
                    inertia / self.total_inertia
                } else {
                    0.0
                };
                cumulative += proportion;
                InertiaRecord {
                    dimension: k + 1,
                    singular_value: sv,
                    inertia,
                    proportion,
                    cumulative,
                }
            })
            .collect()
    }
}

/// One line of the inertia decomposition table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaRecord {
    /// 1-based.
    pub dimension: usize,
    pub singular_value: f64,
    pub inertia: f64,
    pub proportion: f64,
    pub cumulative: f64,
}

/// `p_ij = k_ij / k`.
pub fn proportion_matrix(table: &ContingencyTable) -> Matrix {
    let k = table.grand_total();
    table.counts().map(|x| x / k)
}

/// Row and column masses `(r, c)` of a proportion matrix.
pub fn masses(p: &Matrix) -> (Vec<f64>, Vec<f64>) {
    (p.row_sums(), p.col_sums())
}

/// `A_ij = p_ij / sqrt(r_i c_j)`, uncentered.
pub fn scaled_matrix(p: &Matrix, r: &[f64], c: &[f64]) -> Matrix {
    Matrix::from_fn(p.rows(), p.cols(), |i, j| p[(i, j)] / (r[i] * c[j]).sqrt())
}

/// Same scaling applied to the residual from independence,
/// `(p_ij - r_i c_j) / sqrt(r_i c_j)`.
pub fn centered_scaled_matrix(p: &Matrix, r: &[f64], c: &[f64]) -> Matrix {
    Matrix::from_fn(p.rows(), p.cols(), |i, j| {
        let e = r[i] * c[j];
        (p[(i, j)] - e) / e.sqrt()
    })
}

/// Squared chi-square distances would be `sum_j (p_ij/r_i - c_j)^2 / c_j`;
/// this returns their square roots, one per row of `p`.
pub fn profile_distances(p: &Matrix, r: &[f64], c: &[f64]) -> Vec<f64> {
    (0..p.rows())
        .map(|i| {
            (0..p.cols())
                .map(|j| {
                    let d = p[(i, j)] / r[i] - c[j];
                    d * d / c[j]
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Fits the model. The table is validated first.
pub fn fit(table: &ContingencyTable) -> Result<CorrespondenceModel, FitError> {
    table.check()?;
    let p = proportion_matrix(table);
    let (r, c) = masses(&p);
    let a = scaled_matrix(&p, &r, &c);
    let dec = svd(&a)?;

    let leading = dec.singular_values[0];
    let deviation = (leading - 1.0).abs();
    if deviation > TRIVIAL_AXIS_TOL {
        return Err(FitError::TrivialAxisMissing { leading, deviation });
    }

    let sqrt_r: Vec<f64> = r.iter().map(|x| x.sqrt()).collect();
    let sqrt_c: Vec<f64> = c.iter().map(|x| x.sqrt()).collect();
    let (left, right) = separate_trivial_axis(&dec.left, &dec.right, &dec.singular_values, &sqrt_r);

    let trivial_u = left.column(0);
    let trivial_v = right.column(0);
    let mismatch = trivial_u
        .iter()
        .zip(&sqrt_r)
        .chain(trivial_v.iter().zip(&sqrt_c))
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    if mismatch > TRIVIAL_VECTOR_TOL {
        return Err(FitError::TrivialAxisMissing {
            leading,
            deviation: mismatch,
        });
    }

    let q = dec.singular_values.len();
    let n_axes = q - 1;
    let singular_values: Vec<f64> = dec.singular_values[1..].to_vec();
    let principal_inertias: Vec<f64> = singular_values.iter().map(|s| s * s).collect();
    let total_inertia = principal_inertias.iter().sum();

    let live = |k: usize| singular_values[k] > NULL_AXIS_TOL;
    let row_std = Matrix::from_fn(r.len(), n_axes, |i, k| {
        if live(k) {
            left[(i, k + 1)] / sqrt_r[i]
        } else {
            0.0
        }
    });
    let col_std = Matrix::from_fn(c.len(), n_axes, |j, k| {
        if live(k) {
            right[(j, k + 1)] / sqrt_c[j]
        } else {
            0.0
        }
    });
    let row_principal = scale_columns(&row_std, &singular_values);
    let col_principal = scale_columns(&col_std, &singular_values);

    let row_distances = profile_distances(&p, &r, &c);
    let col_distances = profile_distances(&p.transpose(), &c, &r);

    Ok(CorrespondenceModel {
        row_labels: table.row_labels().to_vec(),
        col_labels: table.col_labels().to_vec(),
        grand_total: table.grand_total(),
        row_masses: r,
        col_masses: c,
        singular_values,
        principal_inertias,
        row_std,
        col_std,
        row_principal,
        col_principal,
        row_distances,
        col_distances,
        total_inertia,
    })
}

/// Rotates the leading cluster of singular pairs (those tied with the
/// leading value within [`TRIVIAL_AXIS_TOL`]) so that its first member is the
/// trivial pair `(sqrt(r), sqrt(c))` and the rest are orthogonal to it.
///
/// With a single leading value this only fixes the sign. Ties arise for
/// tables with perfectly associated blocks, where any basis of the tied
/// subspace is a valid SVD and the trivial direction must be split out
/// explicitly.
fn separate_trivial_axis(
    left: &Matrix,
    right: &Matrix,
    sv: &[f64],
    sqrt_r: &[f64],
) -> (Matrix, Matrix) {
    let mut left = left.clone();
    let mut right = right.clone();
    let m = sv
        .iter()
        .take_while(|&&s| (s - sv[0]).abs() <= TRIVIAL_AXIS_TOL)
        .count();

    // Coordinates of sqrt(r) in the tied left subspace.
    let mut t: Vec<f64> = (0..m)
        .map(|k| (0..left.rows()).map(|i| left[(i, k)] * sqrt_r[i]).sum())
        .collect();
    let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (left, right);
    }
    t.iter_mut().for_each(|x| *x /= norm);

    if m > 1 {
        // Householder reflection H with H e1 = t; its columns are an
        // orthonormal basis of the tied subspace starting at t.
        let mut v = t.clone();
        v[0] -= 1.0;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let h = Matrix::from_fn(m, m, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            if vv > 0.0 {
                id - 2.0 * v[i] * v[j] / vv
            } else {
                id
            }
        });
        rotate_leading_block(&mut left, &h);
        rotate_leading_block(&mut right, &h);
        for k in 1..m {
            fix_sign(&mut left, &mut right, k);
        }
    }

    // Orient the trivial pair along +sqrt(r).
    let along: f64 = (0..left.rows()).map(|i| left[(i, 0)] * sqrt_r[i]).sum();
    if along < 0.0 {
        for i in 0..left.rows() {
            left[(i, 0)] = -left[(i, 0)];
        }
        for j in 0..right.rows() {
            right[(j, 0)] = -right[(j, 0)];
        }
    }
    (left, right)
}

fn rotate_leading_block(x: &mut Matrix, h: &Matrix) {
    let m = h.rows();
    for i in 0..x.rows() {
        let row: Vec<f64> = (0..m).map(|k| x[(i, k)]).collect();
        for j in 0..m {
            x[(i, j)] = (0..m).map(|k| row[k] * h[(k, j)]).sum();
        }
    }
}

/// Same convention as the SVD kernel: largest-magnitude left entry
/// non-negative, lowest index on ties.
fn fix_sign(left: &mut Matrix, right: &mut Matrix, k: usize) {
    let pivot = crate::svd::sign_pivot(&left.column(k));
    if left[(pivot, k)] < 0.0 {
        for i in 0..left.rows() {
            left[(i, k)] = -left[(i, k)];
        }
        for j in 0..right.rows() {
            right[(j, k)] = -right[(j, k)];
        }
    }
}

fn scale_columns(x: &Matrix, factors: &[f64]) -> Matrix {
    Matrix::from_fn(x.rows(), x.cols(), |i, k| x[(i, k)] * factors[k])
}
