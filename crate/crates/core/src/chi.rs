//! Pearson chi-square test of independence and signed per-cell contributions.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::table::{ContingencyTable, TableError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChiError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("non-finite input to the chi-square tail: x = {x}")]
    NonFinite { x: f64 },
    #[error("chi-square tail needs x >= 0 and df >= 1 (x = {x}, df = {df})")]
    Domain { x: f64, df: usize },
}

/// Expected counts, signed cell contributions and the overall test.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub observed: Matrix,
    /// `row_total_i * col_total_j / n`.
    pub expected: Matrix,
    /// `sign(n_ij - E_ij) * (n_ij - E_ij)^2 / E_ij`.
    pub signed_cells: Matrix,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Computes the residual table for a valid contingency table.
pub fn residuals(table: &ContingencyTable) -> Result<ResidualTable, ChiError> {
    table.check()?;
    let obs = table.counts();
    let n = table.grand_total();
    let row_tot = obs.row_sums();
    let col_tot = obs.col_sums();
    let expected = Matrix::from_fn(obs.rows(), obs.cols(), |i, j| row_tot[i] * col_tot[j] / n);
    let signed_cells = Matrix::from_fn(obs.rows(), obs.cols(), |i, j| {
        let diff = obs[(i, j)] - expected[(i, j)];
        let contrib = diff * diff / expected[(i, j)];
        if diff < 0.0 {
            -contrib
        } else {
            contrib
        }
    });
    let statistic: f64 = signed_cells.as_slice().iter().map(|x| x.abs()).sum();
    let df = (obs.rows() - 1) * (obs.cols() - 1);
    let p_value = chi_square_upper_tail(statistic, df)?;
    Ok(ResidualTable {
        row_labels: table.row_labels().to_vec(),
        col_labels: table.col_labels().to_vec(),
        observed: obs.clone(),
        expected,
        signed_cells,
        statistic,
        df,
        p_value,
    })
}

/// Upper-tail probability `P(X >= x)` for a chi-square variable with `df`
/// degrees of freedom, i.e. `Q(df/2, x/2)`. Values too small for `f64` come
/// back as 0.
pub fn chi_square_upper_tail(x: f64, df: usize) -> Result<f64, ChiError> {
    if !x.is_finite() {
        return Err(ChiError::NonFinite { x });
    }
    if x < 0.0 || df == 0 {
        return Err(ChiError::Domain { x, df });
    }
    Ok(regularized_gamma_q(df as f64 / 2.0, x / 2.0))
}

/// `"<0.001"` below one in a thousand, otherwise three decimals.
pub fn format_p(p: f64) -> String {
    if p < 0.001 {
        "<0.001".to_string()
    } else {
        format!("{:.3}", p)
    }
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 10_000;
const LENTZ_TINY: f64 = 1e-300;

/// Regularized upper incomplete gamma `Q(a, x)` for `a > 0`, `x >= 0`.
///
/// Series for `P` when `x < a + 1`, modified Lentz continued fraction for `Q`
/// otherwise.
pub fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..GAMMA_MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * GAMMA_EPS {
                break;
            }
        }
        let p = (log_prefactor.exp() * sum).min(1.0);
        1.0 - p
    } else {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / LENTZ_TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < LENTZ_TINY {
                d = LENTZ_TINY;
            }
            c = b + an / c;
            if c.abs() < LENTZ_TINY {
                c = LENTZ_TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < GAMMA_EPS {
                break;
            }
        }
        (log_prefactor.exp() * h).clamp(0.0, 1.0)
    }
}

/// `ln Γ(x)` for `x > 0` via the Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[f64]]) -> ContingencyTable {
        let rl: Vec<String> = (0..rows.len()).map(|i| format!("r{i}")).collect();
        let cl: Vec<String> = (0..rows[0].len()).map(|j| format!("c{j}")).collect();
        ContingencyTable::new(rl, cl, Matrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn perfect_association() {
        let r = residuals(&t(&[&[10.0, 0.0], &[0.0, 10.0]])).unwrap();
        assert_eq!(r.expected, Matrix::from_rows(&[[5.0; 2]; 2]));
        assert_eq!(
            r.signed_cells,
            Matrix::from_rows(&[[5.0, -5.0], [-5.0, 5.0]])
        );
        assert_eq!(r.statistic, 20.0);
        assert_eq!(r.df, 1);
    }

    #[test]
    fn uniform_table() {
        let r = residuals(&t(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert!(r.signed_cells.as_slice().iter().all(|&x| x == 0.0));
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn tail_special_values() {
        assert_eq!(chi_square_upper_tail(0.0, 1).unwrap(), 1.0);
        assert_eq!(chi_square_upper_tail(0.0, 450).unwrap(), 1.0);
        // df = 2 is an exponential: Q = exp(-x/2)
        for x in [0.5, 1.0, 4.0, 10.0, 60.0] {
            let q = chi_square_upper_tail(x, 2).unwrap();
            assert!((q - (-x / 2.0f64).exp()).abs() < 1e-14, "x={x}: {q}");
        }
        let p = chi_square_upper_tail(3.841, 1).unwrap();
        assert!((p - 0.05).abs() < 5e-4, "{p}");
        let tiny = chi_square_upper_tail(28696.584, 450).unwrap();
        assert!(tiny < 1e-300);
        assert_eq!(format_p(tiny), "<0.001");
    }

    #[test]
    fn tail_errors() {
        assert_eq!(
            chi_square_upper_tail(f64::NAN, 1).unwrap_err().to_string(),
            "non-finite input to the chi-square tail: x = NaN"
        );
        assert!(matches!(
            chi_square_upper_tail(f64::INFINITY, 1),
            Err(ChiError::NonFinite { .. })
        ));
        assert!(matches!(
            chi_square_upper_tail(-1.0, 1),
            Err(ChiError::Domain { .. })
        ));
        assert!(matches!(
            chi_square_upper_tail(1.0, 0),
            Err(ChiError::Domain { .. })
        ));
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(2.0)).abs() < 1e-14);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        // ln(10!) = ln 3628800
        assert!((ln_gamma(11.0) - 3_628_800f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(225.0) - (1..225).map(|k| (k as f64).ln()).sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn p_formatting() {
        assert_eq!(format_p(1e-300), "<0.001");
        assert_eq!(format_p(0.0), "<0.001");
        assert_eq!(format_p(0.05), "0.050");
        assert_eq!(format_p(1.0), "1.000");
        assert_eq!(format_p(0.001), "0.001");
    }
}
