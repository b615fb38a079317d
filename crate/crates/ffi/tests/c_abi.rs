use std::ffi::{CStr, CString};
use std::ptr;

use bayespred_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(bp_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn model(family: &str, hyper: &[(&str, f64)]) -> *mut BpModel {
    let fam = CString::new(family).unwrap();
    let keys: Vec<CString> = hyper.iter().map(|(k, _)| CString::new(*k).unwrap()).collect();
    let key_ptrs: Vec<*const libc::c_char> = keys.iter().map(|k| k.as_ptr()).collect();
    let vals: Vec<f64> = hyper.iter().map(|(_, v)| *v).collect();
    let mut out = ptr::null_mut();
    let st = unsafe { bp_model_new(fam.as_ptr(), key_ptrs.as_ptr(), vals.as_ptr(), hyper.len(), &mut out) };
    assert_eq!(st, BpStatus::Ok, "{}", last_error());
    out
}

#[test]
fn laplace_rule_through_the_c_abi() {
    let m = model("BernoulliUniform", &[]);
    let data = [1.0];
    let mut pred = ptr::null_mut();
    unsafe {
        assert_eq!(bp_predictive_new(m, data.as_ptr(), 1, &mut pred), BpStatus::Ok);
        let mut p = 0.0;
        assert_eq!(bp_predictive_density(pred, 1.0, &mut p), BpStatus::Ok);
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(bp_predictive_cdf(pred, 0.0, &mut p), BpStatus::Ok);
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(bp_posterior_mean(pred, &mut p), BpStatus::Ok);
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
        bp_predictive_free(pred);
        bp_model_free(m);
    }
}

#[test]
fn lomax_predictive() {
    let m = model("ExpGamma", &[("lambda", 2.0)]);
    let data = [0.5, 1.5];
    let mut pred = ptr::null_mut();
    unsafe {
        assert_eq!(bp_predictive_new(m, data.as_ptr(), 2, &mut pred), BpStatus::Ok);
        let mut p = 0.0;
        assert_eq!(bp_predictive_density(pred, 1.0, &mut p), BpStatus::Ok);
        // shape 3, scale 4: 3·4³ / 5⁴
        assert!((p - 3.0 * 64.0 / 625.0).abs() < 1e-14);
        bp_predictive_free(pred);
        bp_model_free(m);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("Cauchy").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { bp_model_new(bad.as_ptr(), ptr::null(), ptr::null(), 0, &mut out) };
    assert_eq!(st, BpStatus::InvalidArgument);
    assert!(out.is_null());
    assert!(last_error().contains("Cauchy"));

    let st = unsafe { bp_model_new(ptr::null(), ptr::null(), ptr::null(), 0, &mut out) };
    assert_eq!(st, BpStatus::NullPointer);

    let m = model("PoissonGamma", &[("lambda", 1.0)]);
    let mut pred = ptr::null_mut();
    let data = [1.5];
    let st = unsafe { bp_predictive_new(m, data.as_ptr(), 1, &mut pred) };
    assert_eq!(st, BpStatus::Domain, "{}", last_error());
    assert!(pred.is_null());

    let (mut mean, mut se, mut fails) = (0.0, 0.0, 0usize);
    let est = CString::new("EmpiricalCDF").unwrap();
    let loss = CString::new("L1").unwrap();
    let st = unsafe { bp_bayes_risk(m, est.as_ptr(), loss.as_ptr(), 2, 10, 1, &mut mean, &mut se, &mut fails) };
    assert_eq!(st, BpStatus::InvalidArgument);
    unsafe { bp_model_free(m) };
    unsafe { bp_model_free(ptr::null_mut()) };
}

#[test]
fn risk_is_reproducible() {
    let m = model("NormalNormal", &[("mu", 0.0), ("tau2", 1.0), ("sigma0_sq", 1.0)]);
    let est = CString::new("PosteriorPredictive").unwrap();
    let loss = CString::new("SquaredTV").unwrap();
    let run = || {
        let (mut mean, mut se, mut fails) = (0.0, 0.0, 0usize);
        let st = unsafe {
            bp_bayes_risk(
                m,
                est.as_ptr(),
                loss.as_ptr(),
                3,
                200,
                9,
                &mut mean,
                &mut se,
                &mut fails,
            )
        };
        assert_eq!(st, BpStatus::Ok, "{}", last_error());
        (mean, se, fails)
    };
    let a = run();
    assert_eq!(a, run());
    assert!(a.0 > 0.0 && a.1 > 0.0 && a.2 == 0);
    assert!(last_error().is_empty());
    unsafe { bp_model_free(m) };
}

#[test]
fn version_matches_core() {
    let v = unsafe { CStr::from_ptr(bp_version()) }.to_str().unwrap();
    assert_eq!(v, bayespred::VERSION);
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bayespred.h")).unwrap();
    for f in [
        "bp_version",
        "bp_last_error",
        "bp_model_new",
        "bp_model_free",
        "bp_predictive_new",
        "bp_predictive_free",
        "bp_predictive_density",
        "bp_predictive_cdf",
        "bp_posterior_mean",
        "bp_bayes_risk",
        "BP_STATUS_NULL_POINTER",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
