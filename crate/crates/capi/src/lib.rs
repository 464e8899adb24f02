//! C ABI for the invwell toolkit.
//!
//! Conventions: every entry point returns an [`InvwellStatus`] code and
//! writes results through out-pointers; model state lives behind the
//! opaque [`InvwellModel`] handle; on failure a thread-local message is
//! retrievable with [`invwell_last_error_message`] until the next failing
//! call on the same thread. The generated header lands in
//! `include/invwell.h`.

use invwell::classical::{self, PhasePoint};
use invwell::error::Error;
use invwell::exact_eigenfunctions::{self, Family};
use invwell::model::{self, ModelParams, Regime};
use invwell::spectra;
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::CString;
use std::os::raw::c_char;

/// Status codes returned by every API call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvwellStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Regime = 3,
    Dimension = 4,
    Convergence = 5,
    Step = 6,
    Frame = 7,
    Internal = 8,
}

/// Coupling regime relative to the exceptional point.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvwellRegime {
    BelowEp = 0,
    AtEp = 1,
    AboveEp = 2,
}

/// Member of the dual eigenfunction family.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvwellFamily {
    Ket = 0,
    Bra = 1,
}

/// Opaque model handle created by [`invwell_model_new`].
pub struct InvwellModel {
    params: ModelParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: InvwellStatus, message: &str) -> InvwellStatus {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
    status
}

fn fail_with(err: Error) -> InvwellStatus {
    let status = match &err {
        Error::InvalidConfig(_) => InvwellStatus::InvalidArgument,
        Error::Regime(_) => InvwellStatus::Regime,
        Error::Dimension(_) | Error::Basis(_) => InvwellStatus::Dimension,
        Error::Convergence(_) => InvwellStatus::Convergence,
        Error::Step(_) => InvwellStatus::Step,
        Error::Frame(_) => InvwellStatus::Frame,
        Error::Io(_) => InvwellStatus::Internal,
    };
    fail(status, &err.to_string())
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread; never free
/// it.
#[no_mangle]
pub extern "C" fn invwell_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create a model handle. `tol <= 0` selects the default tolerance.
/// On success writes the handle to `out`; release it with
/// [`invwell_model_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn invwell_model_new(
    omega: f64,
    g: f64,
    truncation: usize,
    tol: f64,
    out: *mut *mut InvwellModel,
) -> InvwellStatus {
    if out.is_null() {
        return fail(InvwellStatus::NullPointer, "out handle pointer is null");
    }
    let tol = if tol > 0.0 { tol } else { ModelParams::DEFAULT_TOL };
    match ModelParams::new(omega, g, truncation, tol) {
        Ok(params) => {
            *out = Box::into_raw(Box::new(InvwellModel { params }));
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Release a handle returned by [`invwell_model_new`]. A null pointer is
/// a no-op.
///
/// # Safety
/// `model` must be a pointer previously returned by [`invwell_model_new`]
/// and not freed since.
#[no_mangle]
pub unsafe extern "C" fn invwell_model_free(model: *mut InvwellModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

unsafe fn model_ref<'a>(model: *const InvwellModel) -> Option<&'a InvwellModel> {
    model.as_ref()
}

/// Regime tag and effective frequency `√|Ω²−G²|`.
///
/// # Safety
/// `model` must be a live handle; `regime_out` and `value_out` must be
/// valid for writes when non-null (at least one must be non-null).
#[no_mangle]
pub unsafe extern "C" fn invwell_effective_frequency(
    model: *const InvwellModel,
    regime_out: *mut InvwellRegime,
    value_out: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    let eff = model::effective_frequency(&m.params);
    if !regime_out.is_null() {
        *regime_out = match eff.regime {
            Regime::BelowEp => InvwellRegime::BelowEp,
            Regime::AtEp => InvwellRegime::AtEp,
            Regime::AboveEp => InvwellRegime::AboveEp,
        };
    }
    if !value_out.is_null() {
        *value_out = eff.value;
    }
    InvwellStatus::Ok
}

/// Squeeze parameter `η` with `sinh η = G/√(Ω²−G²)`; fails with
/// `Regime` at or beyond the exceptional point.
///
/// # Safety
/// `model` must be a live handle and `eta_out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn invwell_eta(
    model: *const InvwellModel,
    eta_out: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    if eta_out.is_null() {
        return fail(InvwellStatus::NullPointer, "eta_out is null");
    }
    match model::eta_from_g(&m.params) {
        Ok(eta) => {
            *eta_out = eta;
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Potential profile `V(x)` for `len` sample points.
///
/// # Safety
/// `xs` must point to `len` readable doubles and `vs_out` to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn invwell_potential_profile(
    model: *const InvwellModel,
    xs: *const f64,
    len: usize,
    vs_out: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    if xs.is_null() || vs_out.is_null() {
        return fail(InvwellStatus::NullPointer, "sample buffers are null");
    }
    let xs = std::slice::from_raw_parts(xs, len);
    let vs = std::slice::from_raw_parts_mut(vs_out, len);
    for (slot, (_, v)) in vs.iter_mut().zip(model::potential_profile(&m.params, xs)) {
        *slot = v;
    }
    InvwellStatus::Ok
}

/// The lowest `levels` eigenvalues of the regime-appropriate spectrum
/// (ket branch below the exceptional point, the analytic continuation
/// above it), written as split real/imaginary arrays.
///
/// # Safety
/// `re_out` and `im_out` must each point to `levels` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn invwell_spectrum_levels(
    model: *const InvwellModel,
    levels: usize,
    re_out: *mut f64,
    im_out: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    if re_out.is_null() || im_out.is_null() {
        return fail(InvwellStatus::NullPointer, "output buffers are null");
    }
    match spectra::spectrum_point(&m.params, levels) {
        Ok(point) => {
            let re = std::slice::from_raw_parts_mut(re_out, levels);
            let im = std::slice::from_raw_parts_mut(im_out, levels);
            for n in 0..levels {
                // first entry per level index is the ket-family member
                let v = point
                    .levels
                    .iter()
                    .find(|(k, _)| *k == n)
                    .map(|&(_, v)| v)
                    .unwrap_or(Complex64::new(0.0, 0.0));
                re[n] = v.re;
                im[n] = v.im;
            }
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Distances of the computed spectrum from the eigenvalue law
/// (`±iΓ_I(n+½)` below the point, `Γ(n+½)` above).
///
/// # Safety
/// `residuals_out` must point to `levels` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn invwell_eigenvalue_law_residuals(
    model: *const InvwellModel,
    levels: usize,
    residuals_out: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    if residuals_out.is_null() {
        return fail(InvwellStatus::NullPointer, "residuals_out is null");
    }
    match spectra::verify_eigenvalue_law(&m.params, levels) {
        Ok(res) => {
            let out = std::slice::from_raw_parts_mut(residuals_out, levels);
            out.copy_from_slice(&res);
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Evaluate a normalized dual-family eigenfunction at `x` for frequency
/// `freq`.
///
/// # Safety
/// `re_out` and `im_out` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn invwell_eigenfunction_eval(
    family: InvwellFamily,
    n: usize,
    x: f64,
    freq: f64,
    re_out: *mut f64,
    im_out: *mut f64,
) -> InvwellStatus {
    if re_out.is_null() || im_out.is_null() {
        return fail(InvwellStatus::NullPointer, "output pointers are null");
    }
    let half = exact_eigenfunctions::generate_polynomial(
        match family {
            InvwellFamily::Ket => Family::Ket,
            InvwellFamily::Bra => Family::Bra,
        },
        n,
    );
    match exact_eigenfunctions::evaluate(&half, x, freq) {
        Ok(v) => {
            *re_out = v.re;
            *im_out = v.im;
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Residual of the classical gauge identity
/// `|H(x(X,P), p(X,P)) − Γ_I(P²−X²)/2|` at one transformed-frame point.
///
/// # Safety
/// `residual_out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn invwell_gauge_residual(
    model: *const InvwellModel,
    x_re: f64,
    x_im: f64,
    p_re: f64,
    p_im: f64,
    residual_out: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    if residual_out.is_null() {
        return fail(InvwellStatus::NullPointer, "residual_out is null");
    }
    match classical::gauge_equivalence(
        Complex64::new(x_re, x_im),
        Complex64::new(p_re, p_im),
        &m.params,
    ) {
        Ok(rec) => {
            *residual_out = rec.residual;
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Integrate the original-frame complex flow and write the endpoint as
/// `[re x, im x, re p, im p, re H, im H]`.
///
/// # Safety
/// `out6` must point to six writable doubles.
#[no_mangle]
pub unsafe extern "C" fn invwell_orbit_endpoint(
    model: *const InvwellModel,
    x0_re: f64,
    x0_im: f64,
    p0_re: f64,
    p0_im: f64,
    dt: f64,
    steps: usize,
    out6: *mut f64,
) -> InvwellStatus {
    let Some(m) = model_ref(model) else {
        return fail(InvwellStatus::NullPointer, "model handle is null");
    };
    if out6.is_null() {
        return fail(InvwellStatus::NullPointer, "out6 is null");
    }
    let start =
        PhasePoint::original(Complex64::new(x0_re, x0_im), Complex64::new(p0_re, p0_im));
    match classical::integrate(start, dt, steps, &m.params) {
        Ok(traj) => {
            let last = traj.samples.last().unwrap();
            let h = traj.hamiltonian_values.last().unwrap();
            let out = std::slice::from_raw_parts_mut(out6, 6);
            out.copy_from_slice(&[last.q.re, last.q.im, last.mom.re, last.mom.im, h.re, h.im]);
            InvwellStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}
