use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ca_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ca_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn table(csv: &str) -> Result<*mut CaTable, (CaStatus, String)> {
    let c = CString::new(csv).unwrap();
    let mut t = ptr::null_mut();
    match unsafe { ca_table_from_matrix_csv(c.as_ptr(), &mut t) } {
        CaStatus::Ok => Ok(t),
        s => Err((s, last_error())),
    }
}

const HAIR_EYE: &str = include_str!("../../core/tests/fixtures/hair_eye.csv");

fn grand_total(csv: &str) -> f64 {
    csv.lines()
        .skip(1)
        .flat_map(|l| l.split(',').skip(1))
        .map(|v| v.trim().parse::<f64>().unwrap())
        .sum()
}

#[test]
fn fit_and_read_back() {
    let t = table(HAIR_EYE).unwrap();
    let (mut rows, mut cols) = (0, 0);
    unsafe {
        assert_eq!(ca_table_shape(t, &mut rows, &mut cols), CaStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(ca_fit(t, &mut m), CaStatus::Ok);
        let k = ca_model_n_axes(m);
        assert_eq!(k, rows.min(cols) - 1);

        let mut sv = vec![0.0; k];
        assert_eq!(
            ca_model_singular_values(m, sv.as_mut_ptr(), k - 1),
            CaStatus::BufferTooSmall
        );
        assert!(last_error().contains("needed"));
        assert_eq!(
            ca_model_singular_values(m, sv.as_mut_ptr(), k),
            CaStatus::Ok
        );
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));

        let mut inertia = 0.0;
        assert_eq!(ca_model_total_inertia(m, &mut inertia), CaStatus::Ok);
        let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
        assert!((inertia - sum_sq).abs() <= 1e-15);

        let mut rc = vec![0.0; rows * k];
        let mut cc = vec![0.0; cols * k];
        let mut sr = rc.clone();
        let mut sc = cc.clone();
        assert_eq!(
            ca_model_coordinates(
                m,
                CaNormalization::Principal,
                rc.as_mut_ptr(),
                rc.len(),
                cc.as_mut_ptr(),
                cc.len()
            ),
            CaStatus::Ok
        );
        assert_eq!(
            ca_model_coordinates(
                m,
                CaNormalization::Standard,
                sr.as_mut_ptr(),
                sr.len(),
                sc.as_mut_ptr(),
                sc.len()
            ),
            CaStatus::Ok
        );
        for i in 0..rows {
            for a in 0..k {
                assert!((rc[i * k + a] - sr[i * k + a] * sv[a]).abs() <= 1e-15);
            }
        }

        let mut svg = ptr::null_mut();
        assert_eq!(
            ca_model_biplot_svg(m, CaNormalization::Symmetric, 1, 2, &mut svg),
            CaStatus::Ok
        );
        assert!(CStr::from_ptr(svg).to_str().unwrap().contains("<svg"));
        ca_string_free(svg);
        assert_eq!(
            ca_model_biplot_svg(m, CaNormalization::Symmetric, 2, 2, &mut svg),
            CaStatus::BadDims
        );

        let mut r = ptr::null_mut();
        assert_eq!(ca_residuals(t, &mut r), CaStatus::Ok);
        let (mut x2, mut df, mut p) = (0.0, 0, 0.0);
        assert_eq!(ca_residuals_test(r, &mut x2, &mut df, &mut p), CaStatus::Ok);
        assert_eq!(df, (rows - 1) * (cols - 1));
        assert!((x2 - grand_total(HAIR_EYE) * inertia).abs() <= 1e-9 * x2);
        let mut cells = vec![0.0; rows * cols];
        assert_eq!(
            ca_residuals_signed_cells(r, cells.as_mut_ptr(), cells.len()),
            CaStatus::Ok
        );
        let abs_sum: f64 = cells.iter().map(|c| c.abs()).sum();
        assert!((abs_sum - x2).abs() <= 1e-9 * x2);

        ca_residuals_free(r);
        ca_model_free(m);
        ca_table_free(t);
    }
}

#[test]
fn errors_are_reported() {
    let (s, msg) = table(",x,y\nA,1,oops\nB,1,1\n").unwrap_err();
    assert_eq!(s, CaStatus::Parse);
    assert!(msg.contains("oops"), "{msg}");
    let (s, msg) = table(",x,y\nA,1,0\nB,1,0\n").unwrap_err();
    assert_eq!(s, CaStatus::InvalidTable);
    assert!(msg.contains("`y`"), "{msg}");

    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            ca_table_from_matrix_csv(ptr::null(), &mut t),
            CaStatus::NullArgument
        );
        assert_eq!(
            ca_fit(ptr::null(), &mut ptr::null_mut()),
            CaStatus::NullArgument
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            ca_table_from_matrix_csv(bad.as_ptr() as *const c_char, &mut t),
            CaStatus::InvalidUtf8
        );
        // Freeing null is a no-op.
        ca_table_free(ptr::null_mut());
        ca_string_free(ptr::null_mut());
    }
    let good = table(HAIR_EYE).unwrap();
    assert_eq!(last_error(), "");
    unsafe { ca_table_free(good) };
}

#[test]
fn long_layout_and_counts_agree() {
    let long = CString::new("location,cause,deaths\nA,x,10\nB,y,10\nA,y,0\nB,x,0\n").unwrap();
    let f = |s: &str| CString::new(s).unwrap();
    let (rf, cf, vf) = (f("location"), f("cause"), f("deaths"));
    let labels_r = [f("A"), f("B")];
    let labels_c = [f("x"), f("y")];
    let rp: Vec<*const c_char> = labels_r.iter().map(|s| s.as_ptr()).collect();
    let cp: Vec<*const c_char> = labels_c.iter().map(|s| s.as_ptr()).collect();
    let counts = [10.0, 0.0, 0.0, 10.0];
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(
            ca_table_from_long_csv(long.as_ptr(), rf.as_ptr(), cf.as_ptr(), vf.as_ptr(), &mut a),
            CaStatus::Ok
        );
        assert_eq!(
            ca_table_from_counts(counts.as_ptr(), 2, 2, rp.as_ptr(), cp.as_ptr(), &mut b),
            CaStatus::Ok
        );
        let (mut ra, mut rb) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ca_report(a, 0, &mut ra), CaStatus::Ok);
        assert_eq!(ca_report(b, 0, &mut rb), CaStatus::Ok);
        let golden = include_str!("../../core/tests/golden/perfect_2x2_report.md");
        assert_eq!(CStr::from_ptr(ra).to_str().unwrap(), golden);
        assert_eq!(CStr::from_ptr(rb).to_str().unwrap(), golden);
        ca_string_free(ra);
        ca_string_free(rb);
        ca_table_free(a);
        ca_table_free(b);
    }
}

/// Directory holding the built static library: the parent of `deps/`.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header_and_staticlib() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = artifact_dir().join("libca_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or {} missing", lib.display());
        return;
    }
    let tmp = std::env::temp_dir().join(format!("ca_ffi_smoke_{}", std::process::id()));
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&tmp)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&tmp).output().unwrap();
    let _ = std::fs::remove_file(&tmp);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
