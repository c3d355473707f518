//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use bubble_tower_ffi::*;
use std::ffi::CStr;
use std::ptr;

#[test]
fn version_and_messages_are_c_strings() {
    unsafe {
        let v = CStr::from_ptr(bt_version());
        assert!(!v.to_str().unwrap().is_empty());
        let m = CStr::from_ptr(bt_error_message(BT_ERR_INVALID));
        assert_eq!(m.to_str().unwrap(), "invalid parameters");
    }
}

#[test]
fn profile_lifecycle_and_eval() {
    unsafe {
        let mut handle: *mut BtProfile = ptr::null_mut();
        assert_eq!(bt_profile_solve(1, 3.0, 1e-12, &mut handle), BT_OK);
        assert!(!handle.is_null());

        let (mut u0, mut c0, mut rm) = (0.0, 0.0, 0.0);
        assert_eq!(bt_profile_info(handle, &mut u0, &mut c0, &mut rm), BT_OK);
        assert!((u0 - 2.0f64.sqrt()).abs() < 1e-6);
        assert!((c0 - 2.0 * 2.0f64.sqrt()).abs() < 1e-4);
        assert!(rm > 0.0);

        let (mut u, mut du) = (0.0, 0.0);
        assert_eq!(bt_profile_eval(handle, 1.0, &mut u, &mut du, ptr::null_mut()), BT_OK);
        let sech = 2.0f64.sqrt() / 1.0f64.cosh();
        assert!((u - sech).abs() < 1e-6);
        assert!(du < 0.0);

        // negative radius rejected
        assert_eq!(
            bt_profile_eval(handle, -1.0, &mut u, ptr::null_mut(), ptr::null_mut()),
            BT_ERR_INVALID
        );

        bt_profile_free(handle);
    }
}

#[test]
fn null_and_invalid_arguments_map_to_codes() {
    unsafe {
        assert_eq!(bt_profile_solve(3, 3.0, 1e-12, ptr::null_mut()), BT_ERR_NULL);
        let mut handle: *mut BtProfile = ptr::null_mut();
        // supercritical exponent
        assert_eq!(bt_profile_solve(3, 7.0, 1e-12, &mut handle), BT_ERR_INVALID);
        assert_eq!(bt_profile_eval(ptr::null(), 1.0, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), BT_ERR_NULL);
        assert_eq!(bt_coefficients_compute(ptr::null(), 1.0, ptr::null_mut()), BT_ERR_NULL);
    }
}

#[test]
fn coefficients_energy_and_critical_point() {
    unsafe {
        let mut prof: *mut BtProfile = ptr::null_mut();
        assert_eq!(bt_profile_solve(3, 3.0, 1e-12, &mut prof), BT_OK);
        let mut coeffs: *mut BtCoefficients = ptr::null_mut();
        assert_eq!(bt_coefficients_compute(prof, 1.0, &mut coeffs), BT_OK);

        let (mut a1, mut a2, mut b1, mut err) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(bt_coefficients_get(coeffs, &mut a1, &mut a2, &mut b1, &mut err), BT_OK);
        assert!((a1 - 18.8972513).abs() < 1e-3);
        assert!((a2 - 2.0 * a1).abs() < 1e-6 * a2);
        assert!(b1 > 0.0 && err < 1e-5);

        // the m-condition is enforced through the same code path as the CLI
        assert_eq!(
            bt_find_critical_point(coeffs, 2.0, 1000, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            BT_ERR_INVALID
        );

        let (mut r, mut h, mut res) = (0.0, 0.0, 0.0);
        assert_eq!(bt_find_critical_point(coeffs, 5.0, 1000, &mut r, &mut h, &mut res), BT_OK);
        assert!((r / (1000.0 * 1000.0f64.ln()) - 1.0388).abs() < 0.002);
        assert!(res <= 1e-8);

        // gradient vanishes at the reported point
        let (mut fr, mut fh) = (1.0, 1.0);
        assert_eq!(bt_reduced_energy(coeffs, 5.0, 1000, r, h, ptr::null_mut(), &mut fr, &mut fh), BT_OK);
        assert!(fr.abs() < 1e-12 * 1e-12_f64.max(fr.abs() + 1.0));

        bt_coefficients_free(coeffs);
        bt_profile_free(prof);
    }
}

#[test]
fn nondegeneracy_through_the_abi() {
    unsafe {
        let mut prof: *mut BtProfile = ptr::null_mut();
        assert_eq!(bt_profile_solve(3, 3.0, 1e-12, &mut prof), BT_OK);
        let mut pass = -1;
        assert_eq!(bt_nondegeneracy_check(prof, &mut pass), BT_OK);
        assert_eq!(pass, 1);
        bt_profile_free(prof);
    }
}
