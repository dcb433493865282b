mod common;

use ca_core::{chi_square_upper_tail, residuals};
use common::{quadrature_upper_tail, random_table, rel_err, rng};
use proptest::prelude::*;

#[test]
fn tail_matches_quadrature_grid() {
    for &df in &[1usize, 5, 30, 450] {
        for &x in &[0.1, 1.0, 5.0, 20.0] {
            let got = chi_square_upper_tail(x, df).unwrap();
            let want = quadrature_upper_tail(x, df);
            assert!((got - want).abs() <= 1e-6, "x={x} df={df}: {got} vs {want}");
        }
    }
}

#[test]
fn quadrature_oracle_sanity() {
    // df = 2 is exponential, so the oracle can be checked in closed form.
    for x in [0.1, 1.0, 7.5] {
        assert!((quadrature_upper_tail(x, 2) - (-x / 2.0f64).exp()).abs() < 1e-9);
    }
}

#[test]
fn tail_is_monotone() {
    for df in [1usize, 3, 10, 100, 450] {
        let mut prev = 1.0;
        for i in 0..400 {
            let x = i as f64 * 2.5;
            let q = chi_square_upper_tail(x, df).unwrap();
            assert!((0.0..=1.0).contains(&q));
            assert!(q <= prev + 1e-15, "df={df} x={x}: {q} > {prev}");
            prev = q;
        }
    }
}

#[test]
fn residual_table_invariants() {
    for seed in 0..100 {
        let t = random_table(&mut rng(seed), 8);
        let r = residuals(&t).unwrap();
        let abs_sum: f64 = r.signed_cells.as_slice().iter().map(|x| x.abs()).sum();
        assert!(rel_err(abs_sum, r.statistic) <= 1e-10);
        assert_eq!(r.df, (t.n_rows() - 1) * (t.n_cols() - 1));
        let n = t.grand_total();
        for i in 0..t.n_rows() {
            let s: f64 = (0..t.n_cols())
                .map(|j| r.observed[(i, j)] - r.expected[(i, j)])
                .sum();
            assert!(s.abs() <= 1e-9 * n);
        }
        for j in 0..t.n_cols() {
            let s: f64 = (0..t.n_rows())
                .map(|i| r.observed[(i, j)] - r.expected[(i, j)])
                .sum();
            assert!(s.abs() <= 1e-9 * n);
        }
        for i in 0..t.n_rows() {
            for j in 0..t.n_cols() {
                let diff = r.observed[(i, j)] - r.expected[(i, j)];
                let cell = r.signed_cells[(i, j)];
                if diff > 0.0 {
                    assert!(cell > 0.0);
                } else if diff < 0.0 {
                    assert!(cell < 0.0);
                } else {
                    assert_eq!(cell, 0.0);
                }
            }
        }
        assert!((0.0..=1.0).contains(&r.p_value));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_doubles_statistic(seed in any::<u64>()) {
        let t = random_table(&mut rng(seed), 8);
        let r1 = residuals(&t).unwrap();
        let r2 = residuals(&t.scaled(2.0)).unwrap();
        prop_assert!(rel_err(r2.statistic, 2.0 * r1.statistic) <= 1e-12);
        for (a, b) in r1.signed_cells.as_slice().iter().zip(r2.signed_cells.as_slice()) {
            prop_assert_eq!(a.signum(), b.signum());
        }
    }
}
