//! C ABI over the ensemble builder and the spectral-shape solver.
//!
//! Ensembles are opaque heap handles created from the same JSON description
//! the CLI reads. Every fallible call returns a status code and writes its
//! result through an out pointer; on failure a thread-local message is
//! recorded, readable with [`dgldpc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_double, c_int};

use dgldpc::cli::{load_ensemble, CliError};
use dgldpc::ensemble::Ensemble;
use dgldpc::gf2codes::EnumeratorKind;
use dgldpc::spectral::{self, SpectralError};

/// Success.
pub const DGLDPC_OK: c_int = 0;
/// A pointer argument was null or an enum argument was out of range.
pub const DGLDPC_ERR_ARGUMENT: c_int = 1;
/// The JSON description was malformed or inconsistent.
pub const DGLDPC_ERR_SCHEMA: c_int = 2;
/// The solver failed on well-formed input.
pub const DGLDPC_ERR_SOLVER: c_int = 3;
/// The requested weight lies outside the solvable domain.
pub const DGLDPC_ERR_DOMAIN: c_int = 4;

/// Codeword weight spectrum.
pub const DGLDPC_KIND_WEIGHT: c_int = 0;
/// Stopping sets under bounded-distance check decoding.
pub const DGLDPC_KIND_SS_BD: c_int = 1;
/// Stopping sets under MAP check decoding.
pub const DGLDPC_KIND_SS_MAP: c_int = 2;

/// Opaque ensemble handle.
pub struct DgldpcEnsemble {
    inner: Ensemble,
}

/// One solved point of the saddle-point system.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DgldpcPoint {
    pub alpha: c_double,
    /// Growth rate in nats per variable node.
    pub g: c_double,
    pub x0: c_double,
    pub y0: c_double,
    pub z0: c_double,
    pub beta: c_double,
    pub residual: c_double,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(code: c_int, message: &str) -> c_int {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
    code
}

fn fail_cli(err: CliError) -> c_int {
    let code = match err.exit_code() {
        2 => DGLDPC_ERR_SCHEMA,
        _ => DGLDPC_ERR_SOLVER,
    };
    fail(code, &err.to_string())
}

fn fail_spectral(err: SpectralError) -> c_int {
    let code = match err {
        SpectralError::OutOfDomain { .. } | SpectralError::AlphaAtOrAboveMax { .. } => {
            DGLDPC_ERR_DOMAIN
        }
        _ => DGLDPC_ERR_SOLVER,
    };
    fail(code, &err.to_string())
}

unsafe fn ensemble_ref<'a>(handle: *const DgldpcEnsemble) -> Option<&'a Ensemble> {
    handle.as_ref().map(|h| &h.inner)
}

/// The message recorded by the most recent failing call on this thread.
///
/// # Safety
///
/// The returned pointer is borrowed: it stays valid only until the next
/// failing `dgldpc_` call on the same thread, and must not be freed.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a JSON ensemble description and builds the enumerator of `kind`
/// (one of the `DGLDPC_KIND_` constants), storing a new handle in `out`.
///
/// # Safety
///
/// `json` must point to a NUL-terminated UTF-8 string and `out` must be
/// valid for one pointer write. On success `*out` owns the handle and must
/// be released with [`dgldpc_ensemble_free`]; on failure `*out` is null.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_ensemble_new(
    json: *const c_char,
    kind: c_int,
    out: *mut *mut DgldpcEnsemble,
) -> c_int {
    let Some(out) = out.as_mut() else {
        return fail(DGLDPC_ERR_ARGUMENT, "out pointer is null");
    };
    *out = std::ptr::null_mut();
    if json.is_null() {
        return fail(DGLDPC_ERR_ARGUMENT, "json pointer is null");
    }
    let kind = match kind {
        DGLDPC_KIND_WEIGHT => EnumeratorKind::Weight,
        DGLDPC_KIND_SS_BD => EnumeratorKind::StoppingBd,
        DGLDPC_KIND_SS_MAP => EnumeratorKind::StoppingMap,
        other => {
            return fail(
                DGLDPC_ERR_ARGUMENT,
                &format!("unknown enumerator kind {other}"),
            )
        }
    };
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return fail(DGLDPC_ERR_ARGUMENT, "json is not valid UTF-8"),
    };
    match load_ensemble(text, kind) {
        Ok((inner, _label)) => {
            *out = Box::into_raw(Box::new(DgldpcEnsemble { inner }));
            DGLDPC_OK
        }
        Err(err) => fail_cli(err),
    }
}

/// Releases a handle created by [`dgldpc_ensemble_new`]. Null is a no-op.
///
/// # Safety
///
/// `handle` must be null or a pointer returned by [`dgldpc_ensemble_new`]
/// that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_ensemble_free(handle: *mut DgldpcEnsemble) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn scalar_getter(
    handle: *const DgldpcEnsemble,
    out: *mut c_double,
    read: impl Fn(&Ensemble) -> f64,
) -> c_int {
    let Some(e) = ensemble_ref(handle) else {
        return fail(DGLDPC_ERR_ARGUMENT, "ensemble handle is null");
    };
    let Some(out) = out.as_mut() else {
        return fail(DGLDPC_ERR_ARGUMENT, "out pointer is null");
    };
    *out = read(e);
    DGLDPC_OK
}

/// Writes the design rate of the ensemble.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one double write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_design_rate(
    handle: *const DgldpcEnsemble,
    out: *mut c_double,
) -> c_int {
    scalar_getter(handle, out, |e| e.design_rate)
}

/// Writes the ratio of codeword length to variable node count.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one double write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_block_length_ratio(
    handle: *const DgldpcEnsemble,
    out: *mut c_double,
) -> c_int {
    scalar_getter(handle, out, |e| e.k_s)
}

/// Writes the open upper end of the solvable weight domain.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one double write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_alpha_max(
    handle: *const DgldpcEnsemble,
    out: *mut c_double,
) -> c_int {
    scalar_getter(handle, out, |e| e.alpha_max)
}

/// Writes the maximum normalized edge weight the check side supports.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one double write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_max_edge_weight(
    handle: *const DgldpcEnsemble,
    out: *mut c_double,
) -> c_int {
    scalar_getter(handle, out, |e| e.m_bar)
}

/// Solves the saddle-point system at one normalized weight and writes the
/// full solution.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one [`DgldpcPoint`] write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_solve_point(
    handle: *const DgldpcEnsemble,
    alpha: c_double,
    out: *mut DgldpcPoint,
) -> c_int {
    let Some(e) = ensemble_ref(handle) else {
        return fail(DGLDPC_ERR_ARGUMENT, "ensemble handle is null");
    };
    let Some(out) = out.as_mut() else {
        return fail(DGLDPC_ERR_ARGUMENT, "out pointer is null");
    };
    match spectral::solve_point(e, alpha) {
        Ok(p) => {
            *out = DgldpcPoint {
                alpha: p.alpha,
                g: p.g,
                x0: p.x0,
                y0: p.y0,
                z0: p.z0,
                beta: p.beta,
                residual: p.residual,
            };
            DGLDPC_OK
        }
        Err(err) => fail_spectral(err),
    }
}

/// Writes the growth rate `G(alpha)` in nats per variable node.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one double write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_growth_rate(
    handle: *const DgldpcEnsemble,
    alpha: c_double,
    out: *mut c_double,
) -> c_int {
    let mut point = DgldpcPoint::default();
    let code = dgldpc_solve_point(handle, alpha, &mut point);
    if code == DGLDPC_OK {
        if let Some(out) = out.as_mut() {
            *out = point.g;
        } else {
            return fail(DGLDPC_ERR_ARGUMENT, "out pointer is null");
        }
    }
    code
}

/// Writes the critical exponent ratio: the infimum positive weight with
/// nonnegative growth, or 0 when the spectrum grows from zero weight.
///
/// # Safety
///
/// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
/// must be valid for one double write.
#[no_mangle]
pub unsafe extern "C" fn dgldpc_alpha_star(
    handle: *const DgldpcEnsemble,
    out: *mut c_double,
) -> c_int {
    let Some(e) = ensemble_ref(handle) else {
        return fail(DGLDPC_ERR_ARGUMENT, "ensemble handle is null");
    };
    let Some(out) = out.as_mut() else {
        return fail(DGLDPC_ERR_ARGUMENT, "out pointer is null");
    };
    match spectral::critical_exponent(e) {
        Ok(star) => {
            *out = star;
            DGLDPC_OK
        }
        Err(err) => fail_spectral(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "variable_nodes": [
            { "lambda": 1.0, "code": { "kind": "repetition", "length": 3 } }
        ],
        "check_nodes": [
            { "rho": 1.0, "code": { "kind": "spc_cyclic", "length": 6 } }
        ]
    }"#;

    fn new_handle(json: &str, kind: c_int) -> (c_int, *mut DgldpcEnsemble) {
        let text = CString::new(json).unwrap();
        let mut handle = std::ptr::null_mut();
        let code = unsafe { dgldpc_ensemble_new(text.as_ptr(), kind, &mut handle) };
        (code, handle)
    }

    fn last_error() -> String {
        unsafe {
            CStr::from_ptr(dgldpc_last_error_message())
                .to_string_lossy()
                .into_owned()
        }
    }

    #[test]
    fn round_trip_through_the_handle() {
        let (code, handle) = new_handle(TINY, DGLDPC_KIND_WEIGHT);
        assert_eq!(code, DGLDPC_OK);
        unsafe {
            let mut rate = 0.0;
            assert_eq!(dgldpc_design_rate(handle, &mut rate), DGLDPC_OK);
            assert!((rate - 0.5).abs() < 1e-14);

            let mut k_s = 0.0;
            assert_eq!(dgldpc_block_length_ratio(handle, &mut k_s), DGLDPC_OK);
            assert!((k_s - 1.0).abs() < 1e-14);

            let mut g = 0.0;
            assert_eq!(dgldpc_growth_rate(handle, 0.5, &mut g), DGLDPC_OK);
            assert!((g - 0.5 * std::f64::consts::LN_2).abs() < 1e-12);

            let mut point = DgldpcPoint::default();
            assert_eq!(dgldpc_solve_point(handle, 0.25, &mut point), DGLDPC_OK);
            assert!((point.g - 0.222625).abs() < 1e-6);
            assert!(point.residual < 1e-11);

            let mut star = 0.0;
            assert_eq!(dgldpc_alpha_star(handle, &mut star), DGLDPC_OK);
            assert!((star - 0.022733394).abs() < 1e-6);

            dgldpc_ensemble_free(handle);
        }
    }

    #[test]
    fn error_paths_set_codes_and_messages() {
        let (code, handle) = new_handle("{ not json", DGLDPC_KIND_WEIGHT);
        assert_eq!(code, DGLDPC_ERR_SCHEMA);
        assert!(handle.is_null());
        assert!(!last_error().is_empty());

        let (code, _) = new_handle(TINY, 9);
        assert_eq!(code, DGLDPC_ERR_ARGUMENT);
        assert!(last_error().contains("kind"));

        let (code, handle) = new_handle(TINY, DGLDPC_KIND_WEIGHT);
        assert_eq!(code, DGLDPC_OK);
        unsafe {
            let mut g = 0.0;
            assert_eq!(dgldpc_growth_rate(handle, 2.0, &mut g), DGLDPC_ERR_DOMAIN);
            assert!(last_error().contains("domain"));
            assert_eq!(
                dgldpc_growth_rate(std::ptr::null(), 0.25, &mut g),
                DGLDPC_ERR_ARGUMENT
            );
            dgldpc_ensemble_free(handle);
        }

        unsafe { dgldpc_ensemble_free(std::ptr::null_mut()) };
    }
}
