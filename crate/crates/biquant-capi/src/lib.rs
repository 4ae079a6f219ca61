//! C interface to the biquant library.
//!
//! Conventions:
//! - Lie bialgebras are opaque handles created from the JSON
//!   structure-constants document and released with
//!   [`biquant_bialgebra_free`].
//! - Report-producing calls write a NUL-terminated UTF-8 string through
//!   an out-pointer; release it with [`biquant_string_free`]. A report is
//!   produced even when its verdict is a failure status.
//! - Every call returns a status code; on an error status a thread-local
//!   message is available through [`biquant_last_error_message`] until
//!   the next failing call on the same thread.
//!
//! The header `include/biquant.h` mirrors this surface and is maintained
//! by hand alongside it.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, c_uint, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use biquant::liebialg::{self, LieBialgebra};
use biquant::report;

/// The run completed and every asserted identity holds.
pub const BIQUANT_STATUS_OK: c_int = 0;
/// The run completed and produced a report whose verdict is FAIL.
pub const BIQUANT_STATUS_CHECK_FAILED: c_int = 1;
/// A required pointer argument was null.
pub const BIQUANT_STATUS_NULL_POINTER: c_int = 2;
/// An input string was not valid UTF-8.
pub const BIQUANT_STATUS_INVALID_UTF8: c_int = 3;
/// The input document could not be parsed into a bialgebra.
pub const BIQUANT_STATUS_PARSE_ERROR: c_int = 4;
/// The requested truncation order is not supported.
pub const BIQUANT_STATUS_UNSUPPORTED_ORDER: c_int = 5;
/// Any other failure; consult the last error message.
pub const BIQUANT_STATUS_ERROR: c_int = 6;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &biquant::Error) -> c_int {
    match err {
        biquant::Error::UnsupportedOrder(_) => BIQUANT_STATUS_UNSUPPORTED_ORDER,
        biquant::Error::Json(_)
        | biquant::Error::BadStructureConstants(_)
        | biquant::Error::BadRational(_) => BIQUANT_STATUS_PARSE_ERROR,
        _ => BIQUANT_STATUS_ERROR,
    }
}

/// Opaque handle to a Lie bialgebra.
pub struct BiquantBialgebra(LieBialgebra);

/// Last error message of this thread, or null when no error is recorded.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn biquant_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Parse the JSON structure-constants document into a new handle.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` must be a valid
/// location to store the handle.
#[no_mangle]
pub unsafe extern "C" fn biquant_bialgebra_from_json(
    json: *const c_char,
    out: *mut *mut BiquantBialgebra,
) -> c_int {
    if json.is_null() || out.is_null() {
        return BIQUANT_STATUS_NULL_POINTER;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return BIQUANT_STATUS_INVALID_UTF8,
    };
    match liebialg::from_json(text) {
        Ok(l) => {
            *out = Box::into_raw(Box::new(BiquantBialgebra(l)));
            BIQUANT_STATUS_OK
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Release a handle created by [`biquant_bialgebra_from_json`]. Null is
/// ignored.
///
/// # Safety
/// `ptr` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn biquant_bialgebra_free(ptr: *mut BiquantBialgebra) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Dimension of the bialgebra, or -1 on a null handle.
///
/// # Safety
/// `ptr` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn biquant_bialgebra_dim(ptr: *const BiquantBialgebra) -> c_int {
    if ptr.is_null() {
        return -1;
    }
    (*ptr).0.dim() as c_int
}

/// Release a string returned through an out-pointer. Null is ignored.
///
/// # Safety
/// `s` must be a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn biquant_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn emit(out: *mut *mut c_char, text: String, ok: bool) -> c_int {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("report contains an interior NUL".into());
            return BIQUANT_STATUS_ERROR;
        }
    };
    unsafe {
        *out = c.into_raw();
    }
    if ok {
        BIQUANT_STATUS_OK
    } else {
        BIQUANT_STATUS_CHECK_FAILED
    }
}

unsafe fn with_report(
    ptr: *const BiquantBialgebra,
    out: *mut *mut c_char,
    f: impl FnOnce(&LieBialgebra) -> biquant::Result<(String, bool)>,
) -> c_int {
    if ptr.is_null() || out.is_null() {
        return BIQUANT_STATUS_NULL_POINTER;
    }
    let l = &(*ptr).0;
    match catch_unwind(AssertUnwindSafe(|| f(l))) {
        Ok(Ok((text, ok))) => emit(out, text, ok),
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            BIQUANT_STATUS_ERROR
        }
    }
}

/// Axiom report: one PASS/FAIL line per axiom.
///
/// # Safety
/// `ptr` must be a live handle; `out` must be a valid string location.
#[no_mangle]
pub unsafe extern "C" fn biquant_check_report(
    ptr: *const BiquantBialgebra,
    out: *mut *mut c_char,
) -> c_int {
    with_report(ptr, out, |l| Ok(report::check_report(l)))
}

/// The Drinfeld double in the JSON schema plus its verification lines.
///
/// # Safety
/// As for [`biquant_check_report`].
#[no_mangle]
pub unsafe extern "C" fn biquant_double_report(
    ptr: *const BiquantBialgebra,
    out: *mut *mut c_char,
) -> c_int {
    with_report(ptr, out, report::double_report)
}

/// Campbell-Hausdorff coefficient table through the given degree.
///
/// # Safety
/// `out` must be a valid string location.
#[no_mangle]
pub unsafe extern "C" fn biquant_bch_table(order: c_uint, out: *mut *mut c_char) -> c_int {
    if out.is_null() {
        return BIQUANT_STATUS_NULL_POINTER;
    }
    if order == 0 {
        set_error("order must be at least 1".into());
        return BIQUANT_STATUS_UNSUPPORTED_ORDER;
    }
    match catch_unwind(|| report::bch_table(order)) {
        Ok(text) => emit(out, text, true),
        Err(_) => {
            set_error("internal panic".into());
            BIQUANT_STATUS_ERROR
        }
    }
}

/// Gram matrix and triangularity report of the dual pairing.
///
/// # Safety
/// As for [`biquant_check_report`].
#[no_mangle]
pub unsafe extern "C" fn biquant_pair_report(
    ptr: *const BiquantBialgebra,
    max_degree: c_uint,
    order: c_uint,
    out: *mut *mut c_char,
) -> c_int {
    with_report(ptr, out, |l| report::pair_report(l, max_degree, order))
}

/// Twist, R-matrix, deformed coproducts, and quasitriangularity
/// residuals at the given order (at most 3).
///
/// # Safety
/// As for [`biquant_check_report`].
#[no_mangle]
pub unsafe extern "C" fn biquant_quantize_report(
    ptr: *const BiquantBialgebra,
    order: c_uint,
    out: *mut *mut c_char,
) -> c_int {
    with_report(ptr, out, |l| report::quantize_report(l, order))
}

/// Full biquantization-square report at the given order (2 or 3).
///
/// # Safety
/// As for [`biquant_check_report`].
#[no_mangle]
pub unsafe extern "C" fn biquant_square_report(
    ptr: *const BiquantBialgebra,
    order: c_uint,
    out: *mut *mut c_char,
) -> c_int {
    with_report(ptr, out, |l| report::biquant_report(l, order))
}

/// Trivial-bialgebra oracle cross-check.
///
/// # Safety
/// `out` must be a valid string location.
#[no_mangle]
pub unsafe extern "C" fn biquant_oracle_report(
    dim: c_uint,
    order: c_uint,
    out: *mut *mut c_char,
) -> c_int {
    if out.is_null() {
        return BIQUANT_STATUS_NULL_POINTER;
    }
    match catch_unwind(|| report::oracle_report(dim as usize, order)) {
        Ok(Ok((text, ok))) => emit(out, text, ok),
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            BIQUANT_STATUS_ERROR
        }
    }
}
