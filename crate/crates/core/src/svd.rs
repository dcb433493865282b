//! Thin singular value decomposition by one-sided (Hestenes) Jacobi.
//!
//! Columns of a working copy of the matrix are rotated pairwise until they
//! are mutually orthogonal; the column norms are then the singular values and
//! the accumulated rotations form the right singular vectors. The sweep order
//! is fixed, so identical input bits give identical output bits.

use thiserror::Error;

use crate::matrix::Matrix;

/// Sweep cap.
pub const MAX_SWEEPS: usize = 60;

/// Relative slack when picking the sign-deciding entry of a vector.
const SIGN_TIE_REL: f64 = 1e-9;

/// A column pair is treated as orthogonal once `|a_p . a_q|` falls below this
/// multiple of `|a_p| |a_q|`.
const ORTHOGONALITY_TOL: f64 = 1e-15;

/// Columns whose norm is below this multiple of `||A||_F` are negligible:
/// pairs of them are not rotated and their left vectors are rebuilt by
/// completion instead of normalization.
const NEGLIGIBLE_REL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvdError {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is empty ({rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("no convergence after {sweeps} sweeps; largest relative off-diagonal {residual:e}")]
    ConvergenceFailure { sweeps: usize, residual: f64 },
}

/// `A = left * diag(singular_values) * right'` with `q = min(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// `a x q`, orthonormal columns.
    pub left: Matrix,
    /// Length `q`, non-negative, non-increasing.
    pub singular_values: Vec<f64>,
    /// `b x q`, orthonormal columns.
    pub right: Matrix,
}

impl SvdResult {
    pub fn rank_q(&self) -> usize {
        self.singular_values.len()
    }

    /// `left * diag(singular_values) * right'`.
    pub fn reconstruct(&self) -> Matrix {
        let (a, q) = self.left.shape();
        let b = self.right.rows();
        Matrix::from_fn(a, b, |i, j| {
            (0..q)
                .map(|k| self.left[(i, k)] * self.singular_values[k] * self.right[(j, k)])
                .sum()
        })
    }
}

/// Computes the thin SVD of `matrix`.
///
/// Sign convention: in every singular pair the left vector's largest-magnitude
/// entry (lowest index among entries tied to 1e-9 relative) is non-negative; the right vector follows.
pub fn svd(matrix: &Matrix) -> Result<SvdResult, SvdError> {
    let (a, b) = matrix.shape();
    if a == 0 || b == 0 {
        return Err(SvdError::Empty { rows: a, cols: b });
    }
    for i in 0..a {
        for j in 0..b {
            if !matrix[(i, j)].is_finite() {
                return Err(SvdError::NonFinite { row: i, col: j });
            }
        }
    }

    // The Jacobi core wants a tall matrix; A = V S U' when run on A'.
    let mut result = if a >= b {
        jacobi_tall(matrix)?
    } else {
        let t = jacobi_tall(&matrix.transpose())?;
        SvdResult {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        }
    };
    apply_sign_convention(&mut result.left, &mut result.right);
    Ok(result)
}

/// One-sided Jacobi on an `m x n` matrix with `m >= n`.
fn jacobi_tall(matrix: &Matrix) -> Result<SvdResult, SvdError> {
    let (m, n) = matrix.shape();
    debug_assert!(m >= n);

    // Column-major working copies: cols[j] is column j of A*V, vcols[j] of V.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| matrix.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    let fro = matrix.frobenius_norm();
    let negligible = NEGLIGIBLE_REL * fro;
    let negligible_sq = negligible * negligible;

    let mut converged = n < 2;
    let mut worst = 0.0_f64;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        worst = 0.0;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let scale = (alpha * beta).sqrt();
                if scale <= negligible_sq || gamma == 0.0 {
                    continue;
                }
                let off = gamma.abs() / scale;
                if off <= ORTHOGONALITY_TOL {
                    continue;
                }
                worst = worst.max(off);
                rotated = true;

                // Rotation that zeroes the (p, q) entry of the 2x2 Gram block.
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(SvdError::ConvergenceFailure {
            sweeps,
            residual: worst,
        });
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    // Stable: equal singular values keep sweep order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut left = Matrix::zeros(m, n);
    let mut right = Matrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (k, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        let u = if sigma > negligible && sigma > 0.0 {
            cols[src].iter().map(|x| x / sigma).collect()
        } else {
            complete_basis(&basis, m)
        };
        for i in 0..m {
            left[(i, k)] = u[i];
        }
        for i in 0..n {
            right[(i, k)] = vcols[src][i];
        }
        basis.push(u);
    }

    Ok(SvdResult {
        left,
        singular_values,
        right,
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (xp, xq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in xp.iter_mut().zip(xq.iter_mut()) {
        let (u, v) = (*x, *y);
        *x = c * u - s * v;
        *y = s * u + c * v;
    }
}

/// A unit vector orthogonal to every vector in `basis`, taken from the first
/// standard basis direction with a substantial orthogonal remainder.
fn complete_basis(basis: &[Vec<f64>], m: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..m {
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        // Twice is enough.
        for _ in 0..2 {
            for b in basis {
                let proj = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 0.5 {
            return v.into_iter().map(|x| x / norm).collect();
        }
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, v));
        }
    }
    let (norm, v) = best.expect("m > 0");
    v.into_iter().map(|x| x / norm).collect()
}

fn apply_sign_convention(left: &mut Matrix, right: &mut Matrix) {
    for k in 0..left.cols() {
        let pivot = sign_pivot(&left.column(k));
        if left[(pivot, k)] < 0.0 {
            for i in 0..left.rows() {
                left[(i, k)] = -left[(i, k)];
            }
            for i in 0..right.rows() {
                right[(i, k)] = -right[(i, k)];
            }
        }
    }
}

/// Index of the entry that decides a vector's sign: the first one whose
/// magnitude is within a relative `SIGN_TIE_REL` of the largest. The slack
/// keeps rounding noise from picking between entries that are equal in exact
/// arithmetic.
pub(crate) fn sign_pivot(v: &[f64]) -> usize {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.iter()
        .position(|x| x.abs() >= max * (1.0 - SIGN_TIE_REL))
        .unwrap_or(0)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
