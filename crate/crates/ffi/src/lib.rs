//! C ABI over the `slicerank` library.
//!
//! Conventions:
//! * every fallible function returns an [`SrStatus`]; on failure a message is
//!   available from [`sr_last_error`] on the same thread;
//! * results are written through out-pointers, which may only be read when
//!   the call returned `SR_STATUS_OK`;
//! * strings returned through out-pointers are owned by the caller and must be
//!   released with [`sr_string_free`];
//! * handles are created by `*_from_json` and released by the matching
//!   `*_free`. Passing NULL to a free function is a no-op.
//!
//! All input strings are NUL-terminated UTF-8 JSON in the same formats the
//! command-line tool reads. Budgets follow `slicerank::Budget::from_env`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::Value;
use slicerank::decompose::decompose;
use slicerank::oracle::{slice_rank_oracle, OracleRank};
use slicerank::sumfree::{verify, TripleSystem};
use slicerank::tensor::{check_triangular, matrix_rank, FpTensor};
use slicerank::{bound, Budget, Error, PrimeModulus};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, a non-prime modulus, a shape mismatch, and so on.
    InvalidInput = 3,
    /// The request is larger than the configured budget.
    BudgetExceeded = 4,
    /// The request is outside what the algorithm supports.
    Unsupported = 5,
    /// An internal consistency check failed.
    Internal = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// Opaque handle to a triple system.
pub struct SrTripleSystem(TripleSystem);

/// Opaque handle to a tensor over F_p.
pub struct SrTensor(FpTensor);

struct Failure(SrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BudgetExceeded { .. } => SrStatus::BudgetExceeded,
            Error::Unsupported(_) => SrStatus::Unsupported,
            Error::Invariant(_) => SrStatus::Internal,
            _ => SrStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(SrStatus::InvalidInput, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SrStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(SrStatus::Panic, msg))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            SrStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(SrStatus::NullPointer, format!("{name} is NULL")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SrStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn write_json(out: *mut *mut c_char, value: &Value) -> Result<(), Failure> {
    non_null(out, "out")?;
    let text = CString::new(value.to_string()).map_err(|e| Failure(SrStatus::Internal, e.to_string()))?;
    *out = text.into_raw();
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure(SrStatus::Internal, e.to_string()))
}

/// Message for the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn sr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes `{"p","n","N","threeN","profileCount"}` for the bound at `(p, n)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_bound_json(p: u64, n: usize, out: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let report = bound::compute_n(PrimeModulus::new(p)?, n)?;
        write_json(out, &to_value(&report)?)
    })
}

/// Parses a triple system from `{"p","n","triples":[{"a","b","c"}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_system_from_json(json: *const c_char, out: *mut *mut SrTripleSystem) -> SrStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        non_null(out, "out")?;
        let sys: TripleSystem = serde_json::from_str(text)?;
        *out = Box::into_raw(Box::new(SrTripleSystem(sys)));
        Ok(())
    })
}

/// Releases a system handle.
///
/// # Safety
/// `sys` must be NULL or a handle from [`sr_system_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_system_free(sys: *mut SrTripleSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of triples, or 0 for NULL.
///
/// # Safety
/// `sys` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_system_len(sys: *const SrTripleSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.m())
}

/// Checks the ordering condition. `*valid` is set to 1 or 0. When `report` is
/// not NULL it receives the verification report as JSON.
///
/// # Safety
/// `sys` must be a live handle, `valid` a valid pointer, `report` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn sr_verify(
    sys: *const SrTripleSystem,
    valid: *mut i32,
    report: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        non_null(sys, "sys")?;
        non_null(valid, "valid")?;
        let r = verify(&(*sys).0);
        if !report.is_null() {
            write_json(report, &to_value(&r)?)?;
        }
        *valid = i32::from(r.valid);
        Ok(())
    })
}

/// Decomposes the system's indicator tensor into slices and writes the
/// outcome as JSON. With `emit_slices` nonzero the slices are included under
/// `"decomposition"`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_decompose(
    sys: *const SrTripleSystem,
    emit_slices: i32,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        non_null(sys, "sys")?;
        let outcome = decompose(&(*sys).0, &Budget::from_env())?;
        let mut value = to_value(&outcome)?;
        value["nonvanishingSlices"] = outcome.nonvanishing_count().into();
        if emit_slices != 0 {
            value["decomposition"] = to_value(&outcome.decomposition)?;
        }
        write_json(out, &value)
    })
}

/// Parses a tensor from `{"p","k","domainSize","entries":[{"index","value"}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_tensor_from_json(json: *const c_char, out: *mut *mut SrTensor) -> SrStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        non_null(out, "out")?;
        let t: FpTensor = serde_json::from_str(text)?;
        *out = Box::into_raw(Box::new(SrTensor(t)));
        Ok(())
    })
}

/// Releases a tensor handle.
///
/// # Safety
/// `t` must be NULL or a handle from [`sr_tensor_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_tensor_free(t: *mut SrTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Triangular-support certificate as JSON:
/// `{"holds","witness","diagonalCount","lowerBound"}`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_check_triangular(t: *const SrTensor, out: *mut *mut c_char) -> SrStatus {
    guard(|| {
        non_null(t, "tensor")?;
        write_json(out, &to_value(&check_triangular(&(*t).0))?)
    })
}

/// Exact slice rank of a 3-tensor when it is at most `max_rank`. On success
/// `*exact` is 1 and `*rank` holds the rank, or `*exact` is 0 and the rank is
/// larger than `*rank == max_rank`.
///
/// # Safety
/// `t` must be a live handle; `rank` and `exact` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sr_slice_rank(
    t: *const SrTensor,
    max_rank: usize,
    rank: *mut usize,
    exact: *mut i32,
) -> SrStatus {
    guard(|| {
        non_null(t, "tensor")?;
        non_null(rank, "rank")?;
        non_null(exact, "exact")?;
        let budget = Budget::from_env();
        match slice_rank_oracle(&(*t).0, max_rank, &budget)? {
            OracleRank::Exact(r) => {
                *rank = r;
                *exact = 1;
            }
            OracleRank::AboveMax(r) => {
                *rank = r;
                *exact = 0;
            }
        }
        Ok(())
    })
}

/// Rank over F_p of a 2-tensor.
///
/// # Safety
/// `t` must be a live handle and `rank` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_rank(t: *const SrTensor, rank: *mut usize) -> SrStatus {
    guard(|| {
        non_null(t, "tensor")?;
        non_null(rank, "rank")?;
        *rank = matrix_rank(&(*t).0)?;
        Ok(())
    })
}
