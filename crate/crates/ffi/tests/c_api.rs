use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use padic_gk_ffi::*;

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pgk_string_free(s);
    out
}

unsafe fn scalar_text(s: *const PgkScalar) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(pgk_scalar_to_string(s, &mut out), PgkStatus::Ok);
    take_string(out)
}

fn last_error() -> String {
    let e = pgk_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_str().unwrap().to_owned()
}

#[test]
fn scalar_round_trip_and_arithmetic() {
    unsafe {
        let text = CString::new("7^1 * 3 :: 12").unwrap();
        let mut a = ptr::null_mut();
        assert_eq!(pgk_scalar_parse(text.as_ptr(), 7, &mut a), PgkStatus::Ok);
        assert_eq!(scalar_text(a), "7^1 * 3 :: 12");

        let mut sq = ptr::null_mut();
        assert_eq!(pgk_scalar_mul(a, a, &mut sq), PgkStatus::Ok);
        assert_eq!(scalar_text(sq), "7^2 * 9 :: 12");

        let (mut v, mut z) = (0i64, true);
        assert_eq!(pgk_scalar_valuation(sq, &mut v, &mut z), PgkStatus::Ok);
        assert_eq!((v, z), (2, false));

        let mut diff = ptr::null_mut();
        assert_eq!(
            pgk_scalar_arith(a, a, PgkArithOp::Sub, &mut diff),
            PgkStatus::Ok
        );
        assert_eq!(pgk_scalar_valuation(diff, &mut v, &mut z), PgkStatus::Ok);
        assert_eq!((v, z), (13, true));

        let zero = CString::new("0").unwrap();
        let mut zh = ptr::null_mut();
        assert_eq!(pgk_scalar_parse(zero.as_ptr(), 7, &mut zh), PgkStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(
            pgk_scalar_arith(a, zh, PgkArithOp::Div, &mut q),
            PgkStatus::DivisionByZero
        );
        assert!(q.is_null());

        for h in [a, sq, diff, zh] {
            pgk_scalar_free(h);
        }
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let bad = CString::new("not a number").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            pgk_scalar_parse(bad.as_ptr(), 5, &mut out),
            PgkStatus::Parse
        );
        assert!(last_error().contains("parse"));
        assert_eq!(
            pgk_scalar_parse(ptr::null(), 5, &mut out),
            PgkStatus::NullPointer
        );
        assert!(last_error().contains("null"));

        let mut report = ptr::null_mut();
        assert_eq!(
            pgk_protocol_run(2, 20, 0, false, &mut report),
            PgkStatus::OutOfScope
        );
        assert_eq!(
            pgk_protocol_run(9, 20, 0, false, &mut report),
            PgkStatus::InvalidArgument
        );
        assert!(report.is_null());
        assert_eq!(pgk_report_exit_code(ptr::null()), -1);

        let mut g = ptr::null_mut();
        assert_eq!(pgk_morita_gamma(13, 1, 12, 9, &mut g), PgkStatus::CostBound);
        pgk_report_free(ptr::null_mut());
        pgk_scalar_free(ptr::null_mut());
        pgk_string_free(ptr::null_mut());
    }
}

#[test]
fn computations() {
    unsafe {
        let mut tau = ptr::null_mut();
        assert_eq!(pgk_gauss_sum(5, 4, 10, &mut tau), PgkStatus::Ok);
        let tau = take_string(tau);
        assert!(tau.starts_with("[5^0 * 9765624 :: 10,"), "{tau}");

        let mut g = ptr::null_mut();
        assert_eq!(pgk_morita_gamma(5, 0, 1, 4, &mut g), PgkStatus::Ok);
        assert_eq!(scalar_text(g), "5^0 * 1 :: 4");
        pgk_scalar_free(g);

        let (mut value, mut deriv) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(pgk_lfun(5, 1, 20, &mut value, &mut deriv), PgkStatus::Ok);
        assert!(scalar_text(value).starts_with("5^0 "));
        pgk_scalar_free(value);
        pgk_scalar_free(deriv);
        assert_eq!(
            pgk_lfun(5, 2, 20, &mut value, &mut deriv),
            PgkStatus::InvalidArgument
        );
    }
}

#[test]
fn protocol_report() {
    unsafe {
        let mut report = ptr::null_mut();
        assert_eq!(
            pgk_protocol_run(7, 40, 0, false, &mut report),
            PgkStatus::Ok
        );
        let mut row = ptr::null_mut();
        assert_eq!(pgk_report_csv_row(report, &mut row), PgkStatus::Ok);
        assert!(take_string(row).starts_with("7,40,3,"));
        let mut json = ptr::null_mut();
        assert_eq!(pgk_report_json(report, &mut json), PgkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["config"]["num_odd_chi"], 3);
        assert_eq!(pgk_report_exit_code(report), 0);
        pgk_report_free(report);

        let mut strict = ptr::null_mut();
        assert_eq!(pgk_protocol_run(7, 40, 0, true, &mut strict), PgkStatus::Ok);
        assert_eq!(pgk_report_exit_code(strict), 3);
        pgk_report_free(strict);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(pgk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libpadic_gk_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let exe = std::env::temp_dir().join(format!("pgk_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "{stdout}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout.contains("sum 5^1 * 1 :: 9"));
    assert!(stdout.contains("row 5,30,2,"));
}
