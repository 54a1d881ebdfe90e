//! C ABI for the cyclespec library.
//!
//! Callers create an opaque [`CyclespecCtx`] carrying the working precision,
//! invoke evaluation functions that write demoted double-precision results
//! into out-parameters, and inspect failures through integer status codes
//! plus [`cyclespec_last_error`]. Exact rational inputs (shifts) are passed
//! as numerator/denominator pairs so the domain checks stay exact; values
//! are computed at full precision internally and rounded to doubles only at
//! the boundary.
//!
//! Every function is panic-safe: a caught panic reports
//! [`CYCLESPEC_ERR_INTERNAL`] instead of unwinding across the C boundary.

use cyclespec::characters::{enumerate_characters, gauss_sum};
use cyclespec::heat::{heat_kernel_cycle, CycleParams, KernelMethod};
use cyclespec::lfn;
use cyclespec::numeric::{CNum, Rational, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
use cyclespec::resolvent::{self, Normalization};
use cyclespec::trigsums::{self, SumKind, SumSpec};
use cyclespec::Error;
use rug::Float;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Success.
pub const CYCLESPEC_OK: c_int = 0;
/// A parameter violates a domain condition (excluded shift, bad modulus...).
pub const CYCLESPEC_ERR_DOMAIN: c_int = 1;
/// Evaluation point too close to a resolvent pole.
pub const CYCLESPEC_ERR_POLE: c_int = 2;
/// Parameters too close to an excluded set even after precision escalation.
pub const CYCLESPEC_ERR_NEAR_SINGULAR: c_int = 3;
/// The character is not primitive.
pub const CYCLESPEC_ERR_NOT_PRIMITIVE: c_int = 4;
/// Null pointer, unparsable string, or otherwise invalid argument.
pub const CYCLESPEC_ERR_INVALID: c_int = 5;
/// Unexpected internal failure (caught panic).
pub const CYCLESPEC_ERR_INTERNAL: c_int = 6;

/// Opaque evaluation context: working precision plus the last error text.
pub struct CyclespecCtx {
    precision_bits: u32,
    last_error: Option<CString>,
}

/// A complex value demoted to double precision at the ABI boundary.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CyclespecComplex {
    pub re: f64,
    pub im: f64,
}

fn status_of(err: &Error) -> c_int {
    match err {
        Error::Domain(_) => CYCLESPEC_ERR_DOMAIN,
        Error::PoleProximity { .. } => CYCLESPEC_ERR_POLE,
        Error::NearSingular(_) => CYCLESPEC_ERR_NEAR_SINGULAR,
        Error::NotPrimitive { .. } => CYCLESPEC_ERR_NOT_PRIMITIVE,
        Error::DivisionNearZero | Error::LengthMismatch { .. } | Error::InvalidParameter(_) => {
            CYCLESPEC_ERR_INVALID
        }
    }
}

fn set_error(ctx: &mut CyclespecCtx, msg: &str) {
    ctx.last_error = CString::new(msg).ok();
}

fn demote(v: &CNum) -> CyclespecComplex {
    CyclespecComplex {
        re: v.re().to_f64(),
        im: v.im().to_f64(),
    }
}

fn rational_arg(num: i64, den: u64) -> Result<Rational, Error> {
    if den == 0 {
        return Err(Error::InvalidParameter("zero denominator".into()));
    }
    Ok(Rational::from((num, den)))
}

/// Runs `body` with panics converted to CYCLESPEC_ERR_INTERNAL and errors
/// recorded on the context.
fn guarded<F>(ctx: *mut CyclespecCtx, body: F) -> c_int
where
    F: FnOnce(&mut CyclespecCtx) -> Result<(), Error>,
{
    if ctx.is_null() {
        return CYCLESPEC_ERR_INVALID;
    }
    let ctx = unsafe { &mut *ctx };
    match catch_unwind(AssertUnwindSafe(|| body(ctx))) {
        Ok(Ok(())) => {
            ctx.last_error = None;
            CYCLESPEC_OK
        }
        Ok(Err(e)) => {
            let code = status_of(&e);
            set_error(ctx, &e.to_string());
            code
        }
        Err(_) => {
            set_error(ctx, "internal panic");
            CYCLESPEC_ERR_INTERNAL
        }
    }
}

/// Create an evaluation context. `precision_bits` of 0 selects the default
/// (128); values below 53 are rejected with a null return.
#[no_mangle]
pub extern "C" fn cyclespec_ctx_new(precision_bits: u32) -> *mut CyclespecCtx {
    let p = if precision_bits == 0 {
        DEFAULT_PRECISION_BITS
    } else {
        precision_bits
    };
    if p < MIN_PRECISION_BITS {
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(CyclespecCtx {
        precision_bits: p,
        last_error: None,
    }))
}

/// Release a context created by [`cyclespec_ctx_new`]. Null is a no-op.
///
/// # Safety
/// `ctx` must be null or a pointer returned by `cyclespec_ctx_new` that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_ctx_free(ctx: *mut CyclespecCtx) {
    if !ctx.is_null() {
        drop(unsafe { Box::from_raw(ctx) });
    }
}

/// Message for the most recent failure on this context, or null after a
/// success. The pointer stays valid until the next call on the same context.
///
/// # Safety
/// `ctx` must be a live pointer from `cyclespec_ctx_new`.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_last_error(ctx: *const CyclespecCtx) -> *const c_char {
    if ctx.is_null() {
        return std::ptr::null();
    }
    match unsafe { &(*ctx).last_error } {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Working precision of the context, in bits.
///
/// # Safety
/// `ctx` must be a live pointer from `cyclespec_ctx_new`.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_ctx_precision_bits(ctx: *const CyclespecCtx) -> u32 {
    if ctx.is_null() {
        0
    } else {
        unsafe { (*ctx).precision_bits }
    }
}

fn parse_kind(kind: *const c_char) -> Result<SumKind, Error> {
    if kind.is_null() {
        return Err(Error::InvalidParameter("kind is null".into()));
    }
    let text = unsafe { CStr::from_ptr(kind) }
        .to_str()
        .map_err(|_| Error::InvalidParameter("kind is not valid UTF-8".into()))?;
    SumKind::parse(text)
}

/// Evaluate one twisted trigonometric sum.
///
/// `kind` names the family ("cosecant", "secant-double", ...); the shift is
/// the exact rational `shift_num/shift_den`; `direct` selects the literal
/// summation oracle (nonzero) or the closed/recurrence path (zero).
///
/// # Safety
/// `ctx` must be a live context pointer; `kind` a NUL-terminated string;
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_sum(
    ctx: *mut CyclespecCtx,
    kind: *const c_char,
    m: u32,
    r: i64,
    shift_num: i64,
    shift_den: u64,
    n: u32,
    direct: c_int,
    out: *mut CyclespecComplex,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        let sum_kind = parse_kind(kind)?;
        let shift = rational_arg(shift_num, shift_den)?;
        let spec = SumSpec::new(sum_kind, m, r, shift, n)?;
        let result = if direct != 0 {
            trigsums::direct_sum(&spec, ctx.precision_bits)?
        } else {
            trigsums::closed_sum(&spec, ctx.precision_bits)?
        };
        unsafe { *out = demote(&result.value) };
        Ok(())
    })
}

/// First `count` coefficients C_{m,r}(β, n) for n = 1..count by the
/// recurrence path, written into `out` (capacity `count`).
///
/// # Safety
/// `ctx` live; `out` writable for `count` elements.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_cosecant_coefficients(
    ctx: *mut CyclespecCtx,
    m: u32,
    r: i64,
    beta_num: i64,
    beta_den: u64,
    count: u32,
    out: *mut CyclespecComplex,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        let beta = rational_arg(beta_num, beta_den)?;
        let coeffs =
            trigsums::recurrence_shifted(m, r, &beta, count as usize, ctx.precision_bits)?;
        for (i, c) in coeffs.iter().enumerate() {
            unsafe { *out.add(i) = demote(c) };
        }
        Ok(())
    })
}

/// Twisted heat kernel value; `spectral` nonzero selects the spectral
/// expansion, zero the Bessel image sum.
///
/// # Safety
/// `ctx` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_heat_kernel(
    ctx: *mut CyclespecCtx,
    m: u32,
    beta_num: i64,
    beta_den: u64,
    x: i64,
    y: i64,
    t: f64,
    spectral: c_int,
    out: *mut CyclespecComplex,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter("t must be finite".into()));
        }
        let beta = rational_arg(beta_num, beta_den)?;
        let params = CycleParams::new(m, beta, ctx.precision_bits)?;
        let method = if spectral != 0 {
            KernelMethod::Spectral
        } else {
            KernelMethod::Image
        };
        let t_val = Float::with_val(ctx.precision_bits, t);
        let v = heat_kernel_cycle(&params, x, y, &t_val, method)?;
        unsafe { *out = demote(&v.value) };
        Ok(())
    })
}

/// Twisted resolvent kernel in the cancelled (generating-function)
/// normalization, by the Chebyshev closed form.
///
/// # Safety
/// `ctx` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_resolvent(
    ctx: *mut CyclespecCtx,
    m: u32,
    beta_num: i64,
    beta_den: u64,
    r: i64,
    s_re: f64,
    s_im: f64,
    out: *mut CyclespecComplex,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        let beta = rational_arg(beta_num, beta_den)?;
        let p = ctx.precision_bits;
        let s = CNum::new(Float::with_val(p, s_re), Float::with_val(p, s_im));
        let v = resolvent::resolvent_closed(m, &beta, r, &s, Normalization::Cancelled, p)?;
        unsafe { *out = demote(&v) };
        Ok(())
    })
}

/// Resolvent pole locations, ascending. Writes at most `capacity` doubles
/// and stores the total count in `written`.
///
/// # Safety
/// `ctx` live; `out` writable for `capacity` doubles; `written` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_resolvent_poles(
    ctx: *mut CyclespecCtx,
    m: u32,
    beta_num: i64,
    beta_den: u64,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() || written.is_null() {
            return Err(Error::InvalidParameter("out pointers are null".into()));
        }
        let beta = rational_arg(beta_num, beta_den)?;
        let poles = resolvent::resolvent_poles(m, &beta, ctx.precision_bits)?;
        let n = poles.values.len().min(capacity);
        for (i, v) in poles.values.iter().take(n).enumerate() {
            unsafe { *out.add(i) = v.to_f64() };
        }
        unsafe { *written = poles.values.len() };
        Ok(())
    })
}

/// Number of Dirichlet characters mod m (Euler φ(m)).
///
/// # Safety
/// `ctx` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_character_count(
    ctx: *mut CyclespecCtx,
    m: u32,
    out: *mut u32,
) -> c_int {
    guarded(ctx, |_ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        let chars = enumerate_characters(m)?;
        unsafe { *out = chars.len() as u32 };
        Ok(())
    })
}

/// Gauss sum τ(χ) for the character at `char_index` in the canonical
/// enumeration.
///
/// # Safety
/// `ctx` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_gauss_sum(
    ctx: *mut CyclespecCtx,
    m: u32,
    char_index: u32,
    out: *mut CyclespecComplex,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        let chars = enumerate_characters(m)?;
        let chi = chars.get(char_index as usize).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "character index {char_index} out of range ({} characters mod {m})",
                chars.len()
            ))
        })?;
        let tau = gauss_sum(chi, ctx.precision_bits)?;
        unsafe { *out = demote(&tau) };
        Ok(())
    })
}

/// Standard L_{X_m}(n, χ) over csc^{2n}.
pub const CYCLESPEC_L_STANDARD: c_int = 0;
/// Odd-character replacement L̃ over csc^{2n}·cot.
pub const CYCLESPEC_L_TILDE: c_int = 1;
/// Double-argument secant variant L̂ (m not divisible by 4).
pub const CYCLESPEC_L_HAT: c_int = 2;

/// Spectral L-function value L_{X_m}(n, χ) (or the L̃/L̂ variants) by the
/// direct route; `variant` is one of the CYCLESPEC_L_* constants.
///
/// # Safety
/// `ctx` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclespec_lvalue(
    ctx: *mut CyclespecCtx,
    m: u32,
    char_index: u32,
    n: u32,
    variant: c_int,
    out: *mut CyclespecComplex,
) -> c_int {
    guarded(ctx, |ctx| {
        if out.is_null() {
            return Err(Error::InvalidParameter("out pointer is null".into()));
        }
        let chars = enumerate_characters(m)?;
        let chi = chars.get(char_index as usize).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "character index {char_index} out of range ({} characters mod {m})",
                chars.len()
            ))
        })?;
        let p = ctx.precision_bits;
        let value = match variant {
            CYCLESPEC_L_STANDARD => lfn::l_direct(chi, n, p)?,
            CYCLESPEC_L_TILDE => lfn::l_tilde_direct(chi, n, p)?,
            CYCLESPEC_L_HAT => lfn::l_hat_direct(chi, n, p)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown L-function variant {other}"
                )))
            }
        };
        unsafe { *out = demote(&value.value) };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> *mut CyclespecCtx {
        cyclespec_ctx_new(0)
    }

    #[test]
    fn context_lifecycle_and_precision() {
        let c = ctx();
        assert!(!c.is_null());
        unsafe {
            assert_eq!(cyclespec_ctx_precision_bits(c), 128);
            assert!(cyclespec_last_error(c).is_null());
            cyclespec_ctx_free(c);
        }
        assert!(cyclespec_ctx_new(32).is_null());
        unsafe { cyclespec_ctx_free(std::ptr::null_mut()) };
    }

    #[test]
    fn sum_roundtrip_through_the_abi() {
        let c = ctx();
        let kind = CString::new("cosecant").unwrap();
        let mut out = CyclespecComplex::default();
        let status = unsafe { cyclespec_sum(c, kind.as_ptr(), 5, 0, 1, 2, 1, 0, &mut out) };
        assert_eq!(status, CYCLESPEC_OK);
        assert!((out.re - 5.0).abs() < 1e-12);
        assert!(out.im.abs() < 1e-12);

        // the direct oracle agrees
        let mut direct = CyclespecComplex::default();
        let status2 = unsafe { cyclespec_sum(c, kind.as_ptr(), 5, 0, 1, 2, 1, 1, &mut direct) };
        assert_eq!(status2, CYCLESPEC_OK);
        assert!((direct.re - out.re).abs() < 1e-12);
        unsafe { cyclespec_ctx_free(c) };
    }

    #[test]
    fn domain_errors_are_reported() {
        let c = ctx();
        let kind = CString::new("cosecant").unwrap();
        let mut out = CyclespecComplex::default();
        // β = 2 is an integer: excluded
        let status = unsafe { cyclespec_sum(c, kind.as_ptr(), 5, 0, 2, 1, 1, 0, &mut out) };
        assert_eq!(status, CYCLESPEC_ERR_DOMAIN);
        let msg = unsafe { CStr::from_ptr(cyclespec_last_error(c)) };
        assert!(msg.to_str().unwrap().contains("β"));

        // zero denominator
        let status2 = unsafe { cyclespec_sum(c, kind.as_ptr(), 5, 0, 1, 0, 1, 0, &mut out) };
        assert_eq!(status2, CYCLESPEC_ERR_INVALID);
        unsafe { cyclespec_ctx_free(c) };
    }

    #[test]
    fn coefficients_match_library_values() {
        let c = ctx();
        let mut out = [CyclespecComplex::default(); 3];
        let status =
            unsafe { cyclespec_cosecant_coefficients(c, 6, 1, 1, 4, 3, out.as_mut_ptr()) };
        assert_eq!(status, CYCLESPEC_OK);
        let lib = trigsums::recurrence_shifted(6, 1, &Rational::from((1, 4)), 3, 128).unwrap();
        for (abi, exact) in out.iter().zip(&lib) {
            assert!((abi.re - exact.re().to_f64()).abs() < 1e-12);
            assert!((abi.im - exact.im().to_f64()).abs() < 1e-12);
        }
        unsafe { cyclespec_ctx_free(c) };
    }

    #[test]
    fn heat_kernel_methods_agree_through_the_abi() {
        let c = ctx();
        let mut spectral = CyclespecComplex::default();
        let mut image = CyclespecComplex::default();
        unsafe {
            assert_eq!(
                cyclespec_heat_kernel(c, 6, 1, 3, 2, 0, 2.0, 1, &mut spectral),
                CYCLESPEC_OK
            );
            assert_eq!(
                cyclespec_heat_kernel(c, 6, 1, 3, 2, 0, 2.0, 0, &mut image),
                CYCLESPEC_OK
            );
            cyclespec_ctx_free(c);
        }
        assert!((spectral.re - image.re).abs() < 1e-14);
        assert!((spectral.im - image.im).abs() < 1e-14);
    }

    #[test]
    fn resolvent_and_pole_listing() {
        let c = ctx();
        let mut value = CyclespecComplex::default();
        let status = unsafe { cyclespec_resolvent(c, 5, 1, 4, 2, 1.0, 0.5, &mut value) };
        assert_eq!(status, CYCLESPEC_OK);
        assert!(value.re.is_finite());

        let mut poles = [0f64; 8];
        let mut written = 0usize;
        let status2 =
            unsafe { cyclespec_resolvent_poles(c, 4, 0, 1, poles.as_mut_ptr(), 8, &mut written) };
        assert_eq!(status2, CYCLESPEC_OK);
        assert_eq!(written, 3);
        assert_eq!(&poles[..3], &[-2.0, -1.0, 0.0]);
        unsafe { cyclespec_ctx_free(c) };
    }

    #[test]
    fn characters_and_lvalues_through_the_abi() {
        let c = ctx();
        let mut count = 0u32;
        unsafe {
            assert_eq!(cyclespec_character_count(c, 5, &mut count), CYCLESPEC_OK);
        }
        assert_eq!(count, 4);

        let mut tau = CyclespecComplex::default();
        unsafe {
            // index 2 is the quadratic character mod 5
            assert_eq!(cyclespec_gauss_sum(c, 5, 2, &mut tau), CYCLESPEC_OK);
        }
        assert!((tau.re - 5f64.sqrt()).abs() < 1e-12);

        let mut l = CyclespecComplex::default();
        unsafe {
            assert_eq!(
                cyclespec_lvalue(c, 5, 2, 1, CYCLESPEC_L_STANDARD, &mut l),
                CYCLESPEC_OK
            );
        }
        assert!((l.re - 8.0 / 5f64.sqrt()).abs() < 1e-12);

        let mut bad = CyclespecComplex::default();
        let status = unsafe { cyclespec_lvalue(c, 5, 9, 1, CYCLESPEC_L_STANDARD, &mut bad) };
        assert_eq!(status, CYCLESPEC_ERR_INVALID);
        unsafe { cyclespec_ctx_free(c) };
    }

    #[test]
    fn null_handling() {
        let mut out = CyclespecComplex::default();
        let kind = CString::new("cosecant").unwrap();
        let status = unsafe {
            cyclespec_sum(std::ptr::null_mut(), kind.as_ptr(), 5, 0, 1, 2, 1, 0, &mut out)
        };
        assert_eq!(status, CYCLESPEC_ERR_INVALID);

        let c = ctx();
        let status2 = unsafe { cyclespec_sum(c, std::ptr::null(), 5, 0, 1, 2, 1, 0, &mut out) };
        assert_eq!(status2, CYCLESPEC_ERR_INVALID);
        let status3 =
            unsafe { cyclespec_sum(c, kind.as_ptr(), 5, 0, 1, 2, 1, 0, std::ptr::null_mut()) };
        assert_eq!(status3, CYCLESPEC_ERR_INVALID);
        unsafe { cyclespec_ctx_free(c) };
    }
}
