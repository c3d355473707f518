//! C ABI for the bubble-tower library.
//!
//! Conventions: opaque handles behind pointers, integer status codes
//! (`BT_OK` = 0), out-parameters for results, and a `bt_*_free` for
//! every constructor. No call unwinds across the boundary; a caught
//! panic surfaces as `BT_ERR_INTERNAL`. The matching header lives in
//! `include/bubble_tower.h` (kept in sync by hand; `cbindgen.toml` is
//! provided for regeneration).

use bubble_tower::coefficients::{self, CoefficientSet};
use bubble_tower::energy;
use bubble_tower::error::Error;
use bubble_tower::model::ModelParams;
use bubble_tower::profile::{self, RadialProfile};
use bubble_tower::spectrum;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const BT_OK: i32 = 0;
pub const BT_ERR_NULL: i32 = 1;
pub const BT_ERR_INVALID: i32 = 2;
pub const BT_ERR_NUMERICAL: i32 = 3;
pub const BT_ERR_IO: i32 = 4;
pub const BT_ERR_INTERNAL: i32 = 5;

/// Opaque ground-state profile handle.
pub struct BtProfile {
    inner: RadialProfile,
}

/// Opaque interaction-coefficient handle (keeps the provenance needed
/// by the reduced-energy calls).
pub struct BtCoefficients {
    inner: CoefficientSet,
}

fn code_of(err: &Error) -> i32 {
    match err {
        Error::InvalidParams(_) | Error::Config(_) | Error::Dimension { .. } => BT_ERR_INVALID,
        Error::Io(_) => BT_ERR_IO,
        _ => BT_ERR_NUMERICAL,
    }
}

fn guarded(body: impl FnOnce() -> i32) -> i32 {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(BT_ERR_INTERNAL)
}

/// Version string of the underlying library; static storage.
#[no_mangle]
pub extern "C" fn bt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bt_error_message(code: i32) -> *const c_char {
    let msg: &'static str = match code {
        BT_OK => "ok\0",
        BT_ERR_NULL => "null pointer argument\0",
        BT_ERR_INVALID => "invalid parameters\0",
        BT_ERR_NUMERICAL => "numerical failure\0",
        BT_ERR_IO => "i/o failure\0",
        BT_ERR_INTERNAL => "internal error\0",
        _ => "unknown status code\0",
    };
    msg.as_ptr() as *const c_char
}

/// Solves the ground state of −ΔU + U = U^p in dimension `n_dim`.
/// On success writes a heap handle into `out`; release it with
/// [`bt_profile_free`].
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_profile_solve(
    n_dim: u32,
    p: f64,
    tol: f64,
    out: *mut *mut BtProfile,
) -> i32 {
    if out.is_null() {
        return BT_ERR_NULL;
    }
    guarded(|| match profile::solve_ground_state(n_dim as usize, p, tol) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(BtProfile { inner })) };
            BT_OK
        }
        Err(e) => code_of(&e),
    })
}

/// (U, U', U'') at radius r.
///
/// # Safety
/// `handle` must come from `bt_profile_solve`; out-pointers may be
/// null individually (that component is skipped).
#[no_mangle]
pub unsafe extern "C" fn bt_profile_eval(
    handle: *const BtProfile,
    r: f64,
    u: *mut f64,
    du: *mut f64,
    ddu: *mut f64,
) -> i32 {
    if handle.is_null() {
        return BT_ERR_NULL;
    }
    if !(r >= 0.0) {
        return BT_ERR_INVALID;
    }
    guarded(|| {
        let (v, dv, ddv) = unsafe { &*handle }.inner.eval(r);
        unsafe {
            if !u.is_null() {
                *u = v;
            }
            if !du.is_null() {
                *du = dv;
            }
            if !ddu.is_null() {
                *ddu = ddv;
            }
        }
        BT_OK
    })
}

/// U(0), the decay constant C0, and the tail-switch radius.
///
/// # Safety
/// `handle` must come from `bt_profile_solve`.
#[no_mangle]
pub unsafe extern "C" fn bt_profile_info(
    handle: *const BtProfile,
    shoot_value: *mut f64,
    c0: *mut f64,
    r_match: *mut f64,
) -> i32 {
    if handle.is_null() {
        return BT_ERR_NULL;
    }
    let prof = unsafe { &*handle };
    unsafe {
        if !shoot_value.is_null() {
            *shoot_value = prof.inner.shoot_value;
        }
        if !c0.is_null() {
            *c0 = prof.inner.c0;
        }
        if !r_match.is_null() {
            *r_match = prof.inner.r_match;
        }
    }
    BT_OK
}

/// # Safety
/// `handle` must come from `bt_profile_solve` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bt_profile_free(handle: *mut BtProfile) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// A1, A2, B1 by quadrature against the profile.
///
/// # Safety
/// `profile` from `bt_profile_solve`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bt_coefficients_compute(
    profile: *const BtProfile,
    a1: f64,
    out: *mut *mut BtCoefficients,
) -> i32 {
    if profile.is_null() || out.is_null() {
        return BT_ERR_NULL;
    }
    if !(a1 > 0.0) {
        return BT_ERR_INVALID;
    }
    guarded(|| match coefficients::compute_all(&unsafe { &*profile }.inner, a1) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(BtCoefficients { inner })) };
            BT_OK
        }
        Err(e) => code_of(&e),
    })
}

/// # Safety
/// `handle` must come from `bt_coefficients_compute`.
#[no_mangle]
pub unsafe extern "C" fn bt_coefficients_get(
    handle: *const BtCoefficients,
    a1_coeff: *mut f64,
    a2_coeff: *mut f64,
    b1_coeff: *mut f64,
    err_estimate: *mut f64,
) -> i32 {
    if handle.is_null() {
        return BT_ERR_NULL;
    }
    let set = &unsafe { &*handle }.inner;
    unsafe {
        if !a1_coeff.is_null() {
            *a1_coeff = set.a1_coeff;
        }
        if !a2_coeff.is_null() {
            *a2_coeff = set.a2_coeff;
        }
        if !b1_coeff.is_null() {
            *b1_coeff = set.b1_coeff;
        }
        if !err_estimate.is_null() {
            *err_estimate = set.err;
        }
    }
    BT_OK
}

/// # Safety
/// `handle` must come from `bt_coefficients_compute`; no double free.
#[no_mangle]
pub unsafe extern "C" fn bt_coefficients_free(handle: *mut BtCoefficients) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

fn params_for(set: &CoefficientSet, m: f64) -> Result<ModelParams, Error> {
    ModelParams::new(set.n_dim, set.p, set.a1, 0.0, m, 0.1)
}

/// F(r, h) and its exact gradient for the tower with k bubbles per
/// layer and potential tail exponent m.
///
/// # Safety
/// `coeffs` from `bt_coefficients_compute`; out-pointers individually
/// nullable.
#[no_mangle]
pub unsafe extern "C" fn bt_reduced_energy(
    coeffs: *const BtCoefficients,
    m: f64,
    k: u64,
    r: f64,
    h: f64,
    value: *mut f64,
    d_dr: *mut f64,
    d_dh: *mut f64,
) -> i32 {
    if coeffs.is_null() {
        return BT_ERR_NULL;
    }
    guarded(|| {
        let set = &unsafe { &*coeffs }.inner;
        let params = match params_for(set, m) {
            Ok(p) => p,
            Err(e) => return code_of(&e),
        };
        match energy::reduced_energy(set, &params, k as usize, r, h) {
            Ok(rep) => {
                unsafe {
                    if !value.is_null() {
                        *value = rep.value;
                    }
                    if !d_dr.is_null() {
                        *d_dr = rep.d_dr;
                    }
                    if !d_dh.is_null() {
                        *d_dh = rep.d_dh;
                    }
                }
                BT_OK
            }
            Err(e) => code_of(&e),
        }
    })
}

/// Interior critical point (r*, h*) of the reduced energy.
///
/// # Safety
/// `coeffs` from `bt_coefficients_compute`; out-pointers nullable.
#[no_mangle]
pub unsafe extern "C" fn bt_find_critical_point(
    coeffs: *const BtCoefficients,
    m: f64,
    k: u64,
    r_star: *mut f64,
    h_star: *mut f64,
    grad_residual: *mut f64,
) -> i32 {
    if coeffs.is_null() {
        return BT_ERR_NULL;
    }
    guarded(|| {
        let set = &unsafe { &*coeffs }.inner;
        let params = match params_for(set, m) {
            Ok(p) => p,
            Err(e) => return code_of(&e),
        };
        match energy::critical_config(set, &params, k as usize) {
            Ok((_, cp)) => {
                unsafe {
                    if !r_star.is_null() {
                        *r_star = cp.r_star;
                    }
                    if !h_star.is_null() {
                        *h_star = cp.h_star;
                    }
                    if !grad_residual.is_null() {
                        *grad_residual = cp.grad_residual;
                    }
                }
                BT_OK
            }
            Err(e) => code_of(&e),
        }
    })
}

/// Non-degeneracy verdict of the single bubble: writes 1 into `pass`
/// when every sector condition holds, 0 otherwise.
///
/// # Safety
/// `profile` from `bt_profile_solve`; `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn bt_nondegeneracy_check(
    profile: *const BtProfile,
    pass: *mut i32,
) -> i32 {
    if profile.is_null() || pass.is_null() {
        return BT_ERR_NULL;
    }
    guarded(|| match spectrum::nondegeneracy_check(&unsafe { &*profile }.inner) {
        Ok(verdict) => {
            unsafe { *pass = verdict.pass as i32 };
            BT_OK
        }
        Err(e) => code_of(&e),
    })
}
