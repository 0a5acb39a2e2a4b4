//! C ABI over the `wellpoised` library.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every function returns a [`WpStatus`];
//! on failure a message is kept per thread and can be read with
//! [`wp_last_error`]. Strings are copied into caller buffers: the required
//! size including the terminating NUL is always stored in `needed`, and
//! `WP_STATUS_BUFFER_TOO_SMALL` is returned when `buf` cannot hold it.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wellpoised::barnes::{self, BarnesError};
use wellpoised::hyperseries::{self, HParams};
use wellpoised::identity::{self, VerifySettings};
use wellpoised::multint::{self, ABParams, McConfig};
use wellpoised::numctx::{self, PrecisionContext};
use wellpoised::zetaforms::{self, LinearForm};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotConverged = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Precision and tolerance shared by evaluations.
pub struct WpContext(PrecisionContext);

/// An exact linear form `q0 + sum_s q_s zeta(s)`.
pub struct WpLinearForm(LinearForm);

struct Failure(WpStatus, String);

impl Failure {
    fn invalid(e: impl ToString) -> Self {
        Failure(WpStatus::InvalidArgument, e.to_string())
    }
}

impl From<BarnesError> for Failure {
    fn from(e: BarnesError) -> Self {
        match e {
            BarnesError::Truncation { .. } | BarnesError::NotConverged | BarnesError::BranchMismatch { .. } => {
                Failure(WpStatus::NotConverged, e.to_string())
            }
            _ => Failure::invalid(e),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            WpStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(WpStatus::NullPointer, format!("{name} is NULL")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be NULL only if `len` is 0, otherwise point to `len` doubles.
unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, name)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `buf` must be writable for `len` bytes (or NULL with `len` 0); `needed` may be NULL.
unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), Failure> {
    let n = s.len() + 1;
    if !needed.is_null() {
        *needed = n;
    }
    if buf.is_null() || len < n {
        return Err(Failure(WpStatus::BufferTooSmall, format!("buffer needs {n} bytes")));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must be writable for `len` bytes; `needed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn wp_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> WpStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().as_ref().map(|c| c.to_string_lossy().into_owned()).unwrap_or_default());
    guard(|| copy_out(&msg, buf, len, needed))
}

/// Creates a context with `precision_bits` bits and relative tolerance `rel_tol`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn wp_context_new(precision_bits: u32, rel_tol: f64, out: *mut *mut WpContext) -> WpStatus {
    guard(|| {
        non_null(out, "out")?;
        let ctx = numctx::make_context(precision_bits, rel_tol).map_err(Failure::invalid)?;
        *out = Box::into_raw(Box::new(WpContext(ctx)));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`wp_context_new`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn wp_context_free(ctx: *mut WpContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `ctx` must be NULL or a live handle.
unsafe fn context<'a>(ctx: *const WpContext) -> Result<&'a PrecisionContext, Failure> {
    non_null(ctx, "ctx")?;
    Ok(&(*ctx).0)
}

/// Sums the series with parameters `h[0] = h0, h[1..n]`. The value is stored
/// in `value`; if `buf` is not NULL the full-precision decimal is copied too.
///
/// # Safety
/// `h` must point to `n` doubles, `value` must be writable, `buf` must be
/// NULL or writable for `len` bytes, and `needed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn wp_eval_series(
    ctx: *const WpContext,
    h: *const f64,
    n: usize,
    value: *mut f64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> WpStatus {
    guard(|| {
        let ctx = context(ctx)?;
        non_null(value, "value")?;
        let hp = HParams::from_slice(slice(h, n, "h")?).map_err(Failure::invalid)?;
        let v = hyperseries::eval_F(&hp, ctx).map_err(Failure::invalid)?;
        *value = v.value.to_f64();
        if !buf.is_null() {
            copy_out(&v.value.to_string(), buf, len, needed)?;
        }
        if v.converged {
            Ok(())
        } else {
            Err(Failure(WpStatus::NotConverged, "term budget exhausted".into()))
        }
    })
}

/// # Safety
/// `a` and `b` must each point to `k` doubles.
unsafe fn ab_params(a0: f64, a: *const f64, b: *const f64, k: usize) -> Result<ABParams, Failure> {
    ABParams::new(a0, slice(a, k, "a")?.to_vec(), slice(b, k, "b")?.to_vec()).map_err(Failure::invalid)
}

/// The multiple integral `J_k` by tensor quadrature with `nodes` coarse nodes per dimension.
///
/// # Safety
/// `a` and `b` must point to `k` doubles; `value` and `rel_err` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_eval_integral(
    ctx: *const WpContext,
    a0: f64,
    a: *const f64,
    b: *const f64,
    k: usize,
    nodes: usize,
    value: *mut f64,
    rel_err: *mut f64,
) -> WpStatus {
    guard(|| {
        let ctx = context(ctx)?;
        non_null(value, "value")?;
        non_null(rel_err, "rel_err")?;
        let ab = ab_params(a0, a, b, k)?;
        let q = multint::eval_j_quad(&ab, nodes, ctx).map_err(Failure::invalid)?;
        *value = q.value.to_f64();
        *rel_err = q.rel_err;
        Ok(())
    })
}

/// Monte Carlo estimate of `J_k`; deterministic for fixed `(samples, seed, chunks)`.
///
/// # Safety
/// `a` and `b` must point to `k` doubles; `estimate` and `stderr_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_eval_integral_mc(
    a0: f64,
    a: *const f64,
    b: *const f64,
    k: usize,
    samples: u64,
    seed: u64,
    chunks: u32,
    estimate: *mut f64,
    stderr_out: *mut f64,
) -> WpStatus {
    guard(|| {
        non_null(estimate, "estimate")?;
        non_null(stderr_out, "stderr_out")?;
        let ab = ab_params(a0, a, b, k)?;
        let mc = McConfig::new(samples, seed, chunks).map_err(Failure::invalid)?;
        let r = multint::eval_j_mc(&ab, &mc).map_err(Failure::invalid)?;
        *estimate = r.estimate;
        *stderr_out = r.stderr;
        Ok(())
    })
}

/// Evaluates both sides of the series/integral identity at `h`.
///
/// # Safety
/// `h` must point to `n` doubles; the three outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_verify_theorem(
    ctx: *const WpContext,
    h: *const f64,
    n: usize,
    lhs: *mut f64,
    rhs: *mut f64,
    pass: *mut bool,
) -> WpStatus {
    guard(|| {
        let ctx = context(ctx)?;
        for (p, name) in [(lhs as *const f64, "lhs"), (rhs as *const f64, "rhs")] {
            non_null(p, name)?;
        }
        non_null(pass, "pass")?;
        let hp = HParams::from_slice(slice(h, n, "h")?).map_err(Failure::invalid)?;
        let t = identity::verify_theorem(&hp, ctx, &VerifySettings::default()).map_err(Failure::invalid)?;
        *lhs = t.lhs;
        *rhs = t.rhs;
        *pass = t.pass;
        Ok(())
    })
}

/// The contour-integral form of the one-dimensional integral at `z`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_barnes(ctx: *const WpContext, a0: f64, a: f64, b: f64, z: f64, value: *mut f64) -> WpStatus {
    guard(|| {
        let ctx = context(ctx)?;
        non_null(value, "value")?;
        let cc = barnes::ContourConfig::new(0.5 * a0.min(a));
        *value = barnes::barnes_side(a0, a, b, z, &cc, ctx)?.value;
        Ok(())
    })
}

/// Builds the exact linear form of the specialised series for `(k, n, r)`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn wp_linear_form_new(k: usize, n: u64, r: u64, out: *mut *mut WpLinearForm) -> WpStatus {
    guard(|| {
        non_null(out, "out")?;
        let form = zetaforms::linear_form_for(k, n, r).map_err(Failure::invalid)?;
        *out = Box::into_raw(Box::new(WpLinearForm(form)));
        Ok(())
    })
}

/// # Safety
/// `form` must come from [`wp_linear_form_new`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn wp_linear_form_free(form: *mut WpLinearForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// # Safety
/// `form` must be NULL or a live handle.
unsafe fn linear_form<'a>(form: *const WpLinearForm) -> Result<&'a LinearForm, Failure> {
    non_null(form, "form")?;
    Ok(&(*form).0)
}

/// Copies the coefficient of `zeta(s)` as `"p/q"`; `s = 0` selects the rational part.
///
/// # Safety
/// `form` must be a live handle; see the module notes for the buffer contract.
#[no_mangle]
pub unsafe extern "C" fn wp_linear_form_coeff(
    form: *const WpLinearForm,
    s: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> WpStatus {
    guard(|| {
        let f = linear_form(form)?;
        let c = if s == 0 { f.q0.clone() } else { f.coeff(s) };
        copy_out(&c.to_string(), buf, len, needed)
    })
}

/// Copies the form as JSON, e.g. `{"q0":"0","zeta":{"3":"2"}}`.
///
/// # Safety
/// `form` must be a live handle; see the module notes for the buffer contract.
#[no_mangle]
pub unsafe extern "C" fn wp_linear_form_json(
    form: *const WpLinearForm,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> WpStatus {
    guard(|| {
        let f = linear_form(form)?;
        let json = serde_json::to_string(f).map_err(Failure::invalid)?;
        copy_out(&json, buf, len, needed)
    })
}

/// Numerical value of the form at the context precision.
///
/// # Safety
/// `form` and `ctx` must be live handles; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_linear_form_value(form: *const WpLinearForm, ctx: *const WpContext, value: *mut f64) -> WpStatus {
    guard(|| {
        let f = linear_form(form)?;
        let ctx = context(ctx)?;
        non_null(value, "value")?;
        *value = f.value(ctx).map_err(Failure::invalid)?.to_f64();
        Ok(())
    })
}

/// Whether `D_n^{k+1} Phi_n^{-1} J_{k,n}` has integer coefficients (odd `k >= 3`).
///
/// # Safety
/// `included` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_inclusion_check(k: usize, n: u64, included: *mut bool) -> WpStatus {
    guard(|| {
        non_null(included, "included")?;
        *included = zetaforms::inclusion_check(k, n).map_err(Failure::invalid)?;
        Ok(())
    })
}

/// `ln(Phi_n) / n`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_phi_growth(n: u64, value: *mut f64) -> WpStatus {
    guard(|| {
        non_null(value, "value")?;
        *value = zetaforms::phi_growth(n);
        Ok(())
    })
}

/// Order of the group generated by the parameter permutations, with the
/// involution added when `with_involution` is set (`k` in {2, 3} only).
///
/// # Safety
/// `order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_group_order(k: usize, with_involution: bool, order: *mut usize) -> WpStatus {
    guard(|| {
        non_null(order, "order")?;
        let mut gens = identity::permutation_generators(k);
        if with_involution {
            gens.push(identity::c_transform(k).map_err(Failure::invalid)?);
        }
        *order = identity::group_closure(&gens).map_err(Failure::invalid)?.order;
        Ok(())
    })
}
