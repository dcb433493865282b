//! Test-only oracles and generators shared by the integration suites.
//!
//! Nothing here calls into the library's numerical routines: the eigensolver,
//! the gamma function and the quadrature are written independently so they can
//! check the implementation rather than echo it.

#![allow(dead_code)]

pub mod published;

use ca_core::{ContingencyTable, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random `a x b` table with integer entries in `1..=100`, `2 <= a, b <= max`.
pub fn random_table(rng: &mut ChaCha8Rng, max: usize) -> ContingencyTable {
    let a = rng.gen_range(2..=max);
    let b = rng.gen_range(2..=max);
    let m = Matrix::from_fn(a, b, |_, _| rng.gen_range(1..=100) as f64);
    ContingencyTable::new(labels("r", a), labels("c", b), m).unwrap()
}

/// Outer-product table `s_i t_j` with positive random factors.
pub fn independent_table(rng: &mut ChaCha8Rng, max: usize) -> ContingencyTable {
    let a = rng.gen_range(2..=max);
    let b = rng.gen_range(2..=max);
    let s: Vec<f64> = (0..a).map(|_| rng.gen_range(0.5..50.0)).collect();
    let t: Vec<f64> = (0..b).map(|_| rng.gen_range(0.5..50.0)).collect();
    let m = Matrix::from_fn(a, b, |i, j| s[i] * t[j]);
    ContingencyTable::new(labels("r", a), labels("c", b), m).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, a: usize, b: usize) -> Matrix {
    Matrix::from_fn(a, b, |_, _| rng.gen_range(-1.0..1.0))
}

/// Eigenvalues of a symmetric matrix by the classical cyclic Jacobi method,
/// sorted descending.
pub fn jacobi_eigenvalues(sym: &Matrix) -> Vec<f64> {
    let n = sym.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| sym.row(i).to_vec()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Singular values via the eigenvalues of the smaller Gram matrix.
pub fn oracle_singular_values(m: &Matrix) -> Vec<f64> {
    let gram = if m.rows() >= m.cols() {
        m.transpose().matmul(m)
    } else {
        m.matmul(&m.transpose())
    };
    jacobi_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// `ln Γ(df/2)` for integer `df`, from the factorial and half-integer
/// closed forms.
fn ln_gamma_half_integer(df: usize) -> f64 {
    if df % 2 == 0 {
        // Γ(n) = (n-1)!
        let n = df / 2;
        (1..n).map(|k| (k as f64).ln()).sum()
    } else {
        // Γ(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
        let n = (df - 1) / 2;
        let ln_fact = |m: usize| (1..=m).map(|k| (k as f64).ln()).sum::<f64>();
        ln_fact(2 * n) + 0.5 * std::f64::consts::PI.ln() - (n as f64) * 4f64.ln() - ln_fact(n)
    }
}

pub fn chi_square_density(t: f64, df: usize) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let k = df as f64 / 2.0;
    ((k - 1.0) * t.ln() - t / 2.0 - k * 2f64.ln() - ln_gamma_half_integer(df)).exp()
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, tol / 2.0, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, tol / 2.0, depth - 1)
}

/// `P(X >= x)` by integrating the chi-square density over `[x, U]` in fixed
/// panels, each refined adaptively. `U` is far enough out that the remaining
/// mass is far below the comparison tolerance.
pub fn quadrature_upper_tail(x: f64, df: usize) -> f64 {
    let k = df as f64;
    let upper = x.max(k) + 40.0 * (2.0 * k).sqrt() + 200.0;
    let panels = ((upper - x) / 2.0).ceil().max(1.0) as usize;
    let width = (upper - x) / panels as f64;
    let f = |t: f64| chi_square_density(t, df);
    (0..panels)
        .map(|i| {
            let a = x + i as f64 * width;
            adaptive_simpson(&f, a, a + width, 1e-13, 40)
        })
        .sum()
}

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
