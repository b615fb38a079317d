//! C ABI over `bayespred`.
//!
//! Every fallible call returns a [`BpStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`bp_last_error`]. Handles are opaque and owned by the caller, who frees
//! them with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use bayespred::measure::SampleVec;
use bayespred::models::{predictive_cdf, predictive_marginal_density, DominatedModel, Family, PredictiveDistribution};
use bayespred::risk::{bayes_risk_mc, EstimatorKind, EstimatorSpec, LossKind};
use bayespred::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numerical = 4,
    TooManyFailures = 5,
    Panic = 6,
}

/// A parametric family with its prior.
pub struct BpModel(DominatedModel);

/// The posterior predictive after some observed sample.
pub struct BpPredictive(PredictiveDistribution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BpStatus {
    match e {
        Error::Config { msg, .. } if msg == NULL_MSG => BpStatus::NullPointer,
        Error::Config { .. } | Error::Parse { .. } | Error::TargetMismatch(_) | Error::Dimension(_) => {
            BpStatus::InvalidArgument
        }
        Error::Domain(_) | Error::OutOfSupport(_) | Error::InvalidDistribution(_) | Error::UndefinedEstimator(_) => {
            BpStatus::Domain
        }
        Error::TooManyFailures { .. } => BpStatus::TooManyFailures,
        _ => BpStatus::Numerical,
    }
}

fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> BpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BpStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            BpStatus::Panic
        }
    }
}

const NULL_MSG: &str = "null pointer";

fn null(what: &str) -> Error {
    Error::Config {
        field: what.into(),
        msg: NULL_MSG.into(),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::Config {
        field: what.into(),
        msg: "not valid UTF-8".into(),
    })
}

unsafe fn slice_arg<'a, T>(p: *const T, len: size_t, what: &str) -> Result<&'a [T], Error> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Error> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a model from a family name and `n_hyper` key/value pairs.
///
/// # Safety
/// `family` must be a NUL-terminated string; `keys` and `values` must point
/// to `n_hyper` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_model_new(
    family: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    n_hyper: size_t,
    out: *mut *mut BpModel,
) -> BpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let family: Family = str_arg(family, "family")?.parse()?;
        let keys = slice_arg(keys, n_hyper, "keys")?;
        let values = slice_arg(values, n_hyper, "values")?;
        let mut hyper = Vec::with_capacity(n_hyper);
        for (k, v) in keys.iter().zip(values) {
            hyper.push((str_arg(*k, "keys")?, *v));
        }
        let model = DominatedModel::from_hyper(family, hyper)?;
        *out = Box::into_raw(Box::new(BpModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`bp_model_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_model_free(model: *mut BpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Posterior predictive of `model` after observing `data[0..n]`.
///
/// # Safety
/// `model` must be a live handle; `data` must point to `n` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_predictive_new(
    model: *const BpModel,
    data: *const f64,
    n: size_t,
    out: *mut *mut BpPredictive,
) -> BpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let model = &model.as_ref().ok_or_else(|| null("model"))?.0;
        let data = SampleVec::new(slice_arg(data, n, "data")?.to_vec(), &model.support())?;
        *out = Box::into_raw(Box::new(BpPredictive(model.predictive(&data)?)));
        Ok(())
    })
}

/// # Safety
/// `pred` must come from [`bp_predictive_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_predictive_free(pred: *mut BpPredictive) {
    if !pred.is_null() {
        drop(Box::from_raw(pred));
    }
}

/// Predictive density (or mass) at `x`.
///
/// # Safety
/// `pred` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_predictive_density(pred: *const BpPredictive, x: f64, out: *mut f64) -> BpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let pred = &pred.as_ref().ok_or_else(|| null("pred"))?.0;
        *out = predictive_marginal_density(pred, x)?;
        Ok(())
    })
}

/// Predictive distribution function at `t`.
///
/// # Safety
/// `pred` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_predictive_cdf(pred: *const BpPredictive, t: f64, out: *mut f64) -> BpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let pred = &pred.as_ref().ok_or_else(|| null("pred"))?.0;
        *out = predictive_cdf(pred, t)?;
        Ok(())
    })
}

/// Posterior mean of the parameter.
///
/// # Safety
/// `pred` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_posterior_mean(pred: *const BpPredictive, out: *mut f64) -> BpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = pred.as_ref().ok_or_else(|| null("pred"))?.0.posterior().mean();
        Ok(())
    })
}

/// Monte Carlo Bayes risk of an estimator under a loss, both given by name
/// (e.g. `"PosteriorPredictive"`, `"SquaredTV"`).
///
/// # Safety
/// `model` must be a live handle, the names NUL-terminated strings and the
/// out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn bp_bayes_risk(
    model: *const BpModel,
    estimator: *const c_char,
    loss: *const c_char,
    n: size_t,
    reps: size_t,
    seed: u64,
    mean: *mut f64,
    std_error: *mut f64,
    failures: *mut size_t,
) -> BpStatus {
    guard(|| {
        let mean = out_arg(mean, "mean")?;
        let std_error = out_arg(std_error, "std_error")?;
        let failures = out_arg(failures, "failures")?;
        let model = &model.as_ref().ok_or_else(|| null("model"))?.0;
        let kind: EstimatorKind = str_arg(estimator, "estimator")?.parse()?;
        let loss: LossKind = str_arg(loss, "loss")?.parse()?;
        let spec = EstimatorSpec::for_loss(kind, &loss)?;
        let r = bayes_risk_mc(model, &spec, &loss, n, reps, seed)?;
        *mean = r.mean;
        *std_error = r.std_error;
        *failures = r.failures;
        Ok(())
    })
}
