//! C ABI over the qzeta evaluators.
//!
//! Conventions: every function returns a [`QzetaStatus`]; results are written
//! through out-pointers and only when the status is `Ok`. The deformation
//! parameter and tolerances live in an opaque heap handle created by
//! [`qzeta_q_new`] and released by [`qzeta_q_free`]. All entry points catch
//! panics and convert them to `Internal` — nothing unwinds across the
//! boundary.

use num_complex::Complex64;
use qzeta::{QParameter, QzetaError, Tolerance};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Opaque evaluation context: deformation parameter plus tolerances.
pub struct QzetaQ {
    q: QParameter,
    tol: Tolerance,
}

/// Result codes. Everything except `Ok` leaves out-parameters untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QzetaStatus {
    Ok = 0,
    /// bad pointer, q outside (0,1), non-finite input, invalid tolerance
    InvalidArgument = 1,
    /// evaluation point within the hard margin of the pole lattice
    PoleProximity = 2,
    /// term budget exhausted before the tolerance was met
    Budget = 3,
    /// cancellation beyond double-double rescue at the requested tolerance
    PrecisionLoss = 4,
    /// aggregation had fewer usable rows than required
    InsufficientData = 5,
    /// panic inside the library (a bug; please report)
    Internal = 6,
}

/// Which evaluator produced a result.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QzetaMethod {
    Direct = 0,
    Continuation = 1,
}

/// One evaluation outcome. `value_re`/`value_im` are meaningful only when
/// `has_value` is true (the magnitude may overflow f64 while the log form
/// `log_abs`/`arg` stays finite).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QzetaEval {
    pub value_re: f64,
    pub value_im: f64,
    pub log_abs: f64,
    pub arg: f64,
    pub terms_used: u64,
    pub tail_bound: f64,
    pub pole_margin: f64,
    pub method: QzetaMethod,
    pub has_value: bool,
}

fn status_of(e: &QzetaError) -> QzetaStatus {
    match e {
        QzetaError::InvalidParameter(_) | QzetaError::Domain(_) => QzetaStatus::InvalidArgument,
        QzetaError::PoleProximity { .. }
        | QzetaError::GammaPole { .. }
        | QzetaError::ZetaPole { .. } => QzetaStatus::PoleProximity,
        QzetaError::BudgetExceeded { .. } => QzetaStatus::Budget,
        QzetaError::PrecisionLoss { .. } => QzetaStatus::PrecisionLoss,
        QzetaError::InsufficientData { .. } => QzetaStatus::InsufficientData,
    }
}

fn guarded(f: impl FnOnce() -> QzetaStatus) -> QzetaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(QzetaStatus::Internal)
}

fn fill(out: &mut QzetaEval, res: &qzeta::EvalResult) {
    let (re, im, has) = match res.value {
        Some(v) => (v.re, v.im, true),
        None => (f64::NAN, f64::NAN, false),
    };
    *out = QzetaEval {
        value_re: re,
        value_im: im,
        log_abs: res.log_value.log_abs,
        arg: res.log_value.arg,
        terms_used: res.terms_used,
        tail_bound: res.tail_bound,
        pole_margin: res.pole_margin,
        method: match res.method {
            qzeta::Method::Direct => QzetaMethod::Direct,
            qzeta::Method::Continuation => QzetaMethod::Continuation,
        },
        has_value: has,
    };
}

unsafe fn handle<'a>(ptr: *const QzetaQ) -> Option<&'a QzetaQ> {
    ptr.as_ref()
}

/// Create an evaluation context with default tolerances.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one `*mut QzetaQ`.
/// On `Ok` it receives a handle that must be released with [`qzeta_q_free`].
#[no_mangle]
pub unsafe extern "C" fn qzeta_q_new(q: f64, out: *mut *mut QzetaQ) -> QzetaStatus {
    qzeta_q_new_with_tol(q, 1e-10, 10_000_000, out)
}

/// Create an evaluation context with explicit tolerances.
///
/// # Safety
/// Same contract as [`qzeta_q_new`].
#[no_mangle]
pub unsafe extern "C" fn qzeta_q_new_with_tol(
    q: f64,
    rel_tol: f64,
    max_terms: u64,
    out: *mut *mut QzetaQ,
) -> QzetaStatus {
    guarded(|| {
        let Some(slot) = out.as_mut() else {
            return QzetaStatus::InvalidArgument;
        };
        let tol = Tolerance { rel_tol, max_terms };
        if tol.validate().is_err() {
            return QzetaStatus::InvalidArgument;
        }
        match QParameter::new(q) {
            Ok(qp) => {
                *slot = Box::into_raw(Box::new(QzetaQ { q: qp, tol }));
                QzetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a context created by [`qzeta_q_new`]. A null pointer is a no-op.
///
/// # Safety
/// `ptr` must be null or a pointer previously returned through
/// `qzeta_q_new`/`qzeta_q_new_with_tol` that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qzeta_q_free(ptr: *mut QzetaQ) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Evaluate zeta_q(s, t), choosing direct summation or the analytic
/// continuation automatically.
///
/// # Safety
/// `h` must be a live handle; `out` must point to writable memory for one
/// `QzetaEval`.
#[no_mangle]
pub unsafe extern "C" fn qzeta_eval_two(
    h: *const QzetaQ,
    s_re: f64,
    s_im: f64,
    t_re: f64,
    t_im: f64,
    out: *mut QzetaEval,
) -> QzetaStatus {
    guarded(|| {
        let (Some(ctx), Some(slot)) = (handle(h), out.as_mut()) else {
            return QzetaStatus::InvalidArgument;
        };
        let s = Complex64::new(s_re, s_im);
        let t = Complex64::new(t_re, t_im);
        let r = if t.re > 0.1 {
            qzeta::zeta_q_direct(ctx.q, s, t, ctx.tol)
        } else {
            let n = qzeta::adaptive_n(ctx.q, s.im.abs());
            qzeta::zeta_q_continued(ctx.q, s, t, n, ctx.tol)
        };
        match r {
            Ok(res) => {
                fill(slot, &res);
                QzetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Evaluate zeta_q(s, t) through the continuation identity at truncation
/// level `n` (n >= 1).
///
/// # Safety
/// Same contract as [`qzeta_eval_two`].
#[no_mangle]
pub unsafe extern "C" fn qzeta_eval_continued(
    h: *const QzetaQ,
    s_re: f64,
    s_im: f64,
    t_re: f64,
    t_im: f64,
    n: u32,
    out: *mut QzetaEval,
) -> QzetaStatus {
    guarded(|| {
        let (Some(ctx), Some(slot)) = (handle(h), out.as_mut()) else {
            return QzetaStatus::InvalidArgument;
        };
        let s = Complex64::new(s_re, s_im);
        let t = Complex64::new(t_re, t_im);
        match qzeta::zeta_q_continued(ctx.q, s, t, n, ctx.tol) {
            Ok(res) => {
                fill(slot, &res);
                QzetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Evaluate the single-variable zeta_q(s) = zeta_q(s, s-1).
///
/// # Safety
/// Same contract as [`qzeta_eval_two`].
#[no_mangle]
pub unsafe extern "C" fn qzeta_eval_single(
    h: *const QzetaQ,
    s_re: f64,
    s_im: f64,
    out: *mut QzetaEval,
) -> QzetaStatus {
    guarded(|| {
        let (Some(ctx), Some(slot)) = (handle(h), out.as_mut()) else {
            return QzetaStatus::InvalidArgument;
        };
        match qzeta::zeta_q_single(ctx.q, Complex64::new(s_re, s_im), ctx.tol) {
            Ok(res) => {
                fill(slot, &res);
                QzetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Truncation level prescribed by the growth analysis for height `abs_v`.
///
/// # Safety
/// `h` must be a live handle; `out` must point to writable memory for one
/// `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn qzeta_choose_n(
    h: *const QzetaQ,
    re_t: f64,
    abs_v: f64,
    out: *mut u32,
) -> QzetaStatus {
    guarded(|| {
        let (Some(ctx), Some(slot)) = (handle(h), out.as_mut()) else {
            return QzetaStatus::InvalidArgument;
        };
        match qzeta::choose_n(ctx.q, re_t, abs_v) {
            Ok(n) => {
                *slot = n;
                QzetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Distance from t to the continuation's pole lattice:
/// inf_{r >= r_min} |1 - q^{t+r}|.
///
/// # Safety
/// `h` must be a live handle; `out` must point to writable memory for one
/// `double`.
#[no_mangle]
pub unsafe extern "C" fn qzeta_epsilon_margin(
    h: *const QzetaQ,
    t_re: f64,
    t_im: f64,
    r_min: i64,
    out: *mut f64,
) -> QzetaStatus {
    guarded(|| {
        let (Some(ctx), Some(slot)) = (handle(h), out.as_mut()) else {
            return QzetaStatus::InvalidArgument;
        };
        let t = Complex64::new(t_re, t_im);
        if !t.re.is_finite() || !t.im.is_finite() {
            return QzetaStatus::InvalidArgument;
        }
        *slot = qzeta::epsilon_margin(ctx.q, t, r_min);
        QzetaStatus::Ok
    })
}

/// Riemann zeta for comparison targets (Re s > -1, s != 1).
///
/// # Safety
/// `out_re` and `out_im` must each point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn qzeta_classical_zeta(
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QzetaStatus {
    guarded(|| {
        let (Some(re), Some(im)) = (out_re.as_mut(), out_im.as_mut()) else {
            return QzetaStatus::InvalidArgument;
        };
        match qzeta::classical_zeta(Complex64::new(s_re, s_im)) {
            Ok(z) => {
                *re = z.re;
                *im = z.im;
                QzetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn qzeta_status_message(status: QzetaStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        QzetaStatus::Ok => b"ok\0",
        QzetaStatus::InvalidArgument => b"invalid argument\0",
        QzetaStatus::PoleProximity => b"evaluation point too close to the pole lattice\0",
        QzetaStatus::Budget => b"term budget exhausted\0",
        QzetaStatus::PrecisionLoss => b"cancellation beyond double-double rescue\0",
        QzetaStatus::InsufficientData => b"not enough usable data points\0",
        QzetaStatus::Internal => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qzeta_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
