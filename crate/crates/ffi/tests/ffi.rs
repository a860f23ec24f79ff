use std::ffi::{c_char, CStr, CString};
use std::ptr;

use lpbm_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe { lpbm_last_error(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { lpbm_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) }, LpbmStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn ball(n: usize, r: f64) -> *mut LpbmBody {
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { lpbm_body_ball(n, r, &mut b) }, LpbmStatus::Ok);
    b
}

#[test]
fn version_is_a_string() {
    let v = unsafe { CStr::from_ptr(lpbm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn ball_support_and_dimension() {
    let b = ball(3, 2.0);
    let mut n = 0;
    let mut h = 0.0;
    unsafe {
        assert_eq!(lpbm_body_dimension(b, &mut n), LpbmStatus::Ok);
        assert_eq!(lpbm_body_support(b, [0.0, 3.0, 4.0].as_ptr(), 3, &mut h), LpbmStatus::Ok);
        lpbm_body_free(b);
    }
    assert_eq!(n, 3);
    assert!((h - 10.0).abs() < 1e-12);
}

#[test]
fn wrong_vector_length_is_rejected() {
    let b = ball(2, 1.0);
    let mut h = 7.0;
    let s = unsafe { lpbm_body_support(b, [1.0, 0.0, 0.0].as_ptr(), 3, &mut h) };
    unsafe { lpbm_body_free(b) };
    assert_eq!(s, LpbmStatus::InvalidArgument);
    assert_eq!(h, 7.0);
    assert!(!last_error().is_empty());
}

#[test]
fn null_pointers_are_reported() {
    let mut n = 0;
    assert_eq!(unsafe { lpbm_body_dimension(ptr::null(), &mut n) }, LpbmStatus::NullPointer);
    assert!(last_error().contains("body"));
    assert_eq!(unsafe { lpbm_body_ball(3, 1.0, ptr::null_mut()) }, LpbmStatus::NullPointer);
    unsafe {
        lpbm_body_free(ptr::null_mut());
        lpbm_grid_free(ptr::null_mut());
    }
}

#[test]
fn invalid_parameters_map_to_invalid_argument() {
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { lpbm_body_ball(3, -1.0, &mut b) }, LpbmStatus::InvalidArgument);
    assert!(b.is_null());
    assert_eq!(unsafe { lpbm_body_ball(5, 1.0, &mut b) }, LpbmStatus::InvalidArgument);
}

#[test]
fn json_round_trip() {
    let json = CString::new(r#"{"kind":"polygon","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}"#).unwrap();
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { lpbm_body_from_json(json.as_ptr(), &mut b) }, LpbmStatus::Ok, "{}", last_error());
    let mut needed = 0;
    assert_eq!(unsafe { lpbm_body_to_json(b, ptr::null_mut(), 0, &mut needed) }, LpbmStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { lpbm_body_to_json(b, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) }, LpbmStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { lpbm_body_from_json(buf.as_ptr(), &mut again) }, LpbmStatus::Ok);
    let mut h = 0.0;
    unsafe {
        assert_eq!(lpbm_body_support(again, [1.0, 1.0].as_ptr(), 2, &mut h), LpbmStatus::Ok);
        lpbm_body_free(b);
        lpbm_body_free(again);
    }
    assert!((h - 2.0).abs() < 1e-12);
}

#[test]
fn bad_json_and_missing_file() {
    let bad = CString::new("{not json").unwrap();
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { lpbm_body_from_json(bad.as_ptr(), &mut b) }, LpbmStatus::InvalidArgument);
    let path = CString::new("/nonexistent/body.json").unwrap();
    assert_eq!(unsafe { lpbm_body_load(path.as_ptr(), &mut b) }, LpbmStatus::Io);
    assert!(b.is_null());
}

#[test]
fn load_from_file() {
    let dir = std::env::temp_dir().join(format!("lpbm-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("ball.json");
    std::fs::write(&file, r#"{"kind":"ball","n":3,"radius":1.5}"#).unwrap();
    let path = CString::new(file.to_str().unwrap()).unwrap();
    let mut b = ptr::null_mut();
    let s = unsafe { lpbm_body_load(path.as_ptr(), &mut b) };
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(s, LpbmStatus::Ok, "{}", last_error());
    let mut h = 0.0;
    unsafe {
        lpbm_body_support(b, [0.0, 0.0, 1.0].as_ptr(), 3, &mut h);
        lpbm_body_free(b);
    }
    assert!((h - 1.5).abs() < 1e-12);
}

#[test]
fn ball_volumes_and_dilate_equality() {
    let (k, l) = (ball(3, 1.0), ball(3, 2.0));
    let mut v = 0.0;
    let mut err = -1.0;
    assert_eq!(unsafe { lpbm_intrinsic_volume(k, 3, 32, &mut v, &mut err) }, LpbmStatus::Ok);
    assert!((v - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-8);
    assert!(err >= 0.0);
    let mut verdict = LpbmVerdict::default();
    assert_eq!(unsafe { lpbm_check_inequality(k, l, 0.5, 0.3, 2, &mut verdict) }, LpbmStatus::Ok, "{}", last_error());
    assert!(verdict.margin_p.abs() < 1e-6, "{verdict:?}");
    let mut combo = ptr::null_mut();
    assert_eq!(unsafe { lpbm_body_combine(k, l, 0.0, 0.5, &mut combo) }, LpbmStatus::Ok);
    let mut h = 0.0;
    unsafe {
        lpbm_body_support(combo, [1.0, 0.0, 0.0].as_ptr(), 3, &mut h);
        lpbm_body_free(combo);
        lpbm_body_free(k);
        lpbm_body_free(l);
    }
    assert!((h - 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn grid_and_spectral_gap_on_the_ball() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { lpbm_grid_new(3, 16, &mut g) }, LpbmStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { lpbm_grid_len(g, &mut len) }, LpbmStatus::Ok);
    assert!(len > 0);
    let b = ball(3, 1.0);
    let mut gap = 0.0;
    assert_eq!(unsafe { lpbm_spectral_gap(b, g, 6, &mut gap) }, LpbmStatus::Ok, "{}", last_error());
    let mut steiner = 1.0;
    assert_eq!(unsafe { lpbm_steiner_gap(b, g, [0.5, 1.0].as_ptr(), 2, &mut steiner) }, LpbmStatus::Ok);
    unsafe {
        lpbm_body_free(b);
        lpbm_grid_free(g);
    }
    assert!((gap - 3.0).abs() < 1e-6, "{gap}");
    assert!(steiner < 1e-6);
}

#[test]
fn quadrupole_solve_converges() {
    let mut summary = LpbmSolveSummary::default();
    let s = unsafe { lpbm_solve_quadrupole(1, 0.5, 0.05, false, &mut summary) };
    assert_eq!(s, LpbmStatus::Ok, "{}", last_error());
    assert!(summary.converged && summary.residual < 1e-10);
    assert!(summary.min_h > 0.0 && summary.max_h >= summary.min_h);
}

#[test]
fn excluded_regime_needs_opt_in() {
    let mut summary = LpbmSolveSummary::default();
    let s = unsafe { lpbm_solve_quadrupole(1, 0.0, 0.05, false, &mut summary) };
    assert_eq!(s, LpbmStatus::InvalidArgument);
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lpbm.h")).unwrap();
    for name in [
        "lpbm_version",
        "lpbm_last_error",
        "lpbm_body_from_json",
        "lpbm_body_load",
        "lpbm_body_ball",
        "lpbm_body_ellipsoid",
        "lpbm_body_cube",
        "lpbm_body_free",
        "lpbm_body_support",
        "lpbm_body_combine",
        "lpbm_grid_new",
        "lpbm_intrinsic_volume",
        "lpbm_check_inequality",
        "lpbm_spectral_gap",
        "lpbm_solve_quadrupole",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = std::env::temp_dir().join(format!("lpbm-hdr-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("check.c");
    std::fs::write(&src, "#include \"lpbm.h\"\nint main(void){ struct LpbmVerdict v; (void)v; return (int)LPBM_STATUS_OK; }\n").unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
