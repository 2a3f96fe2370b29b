//! C ABI for the superbolic kernel.
//!
//! The surface uses opaque handles for supernumbers, points, and geodesics
//! (float-backed; the exact rational mode stays on the Rust side) and JSON
//! strings for structured results. Every fallible call returns an
//! [`SbStatus`]; the last error message is kept per thread and can be read
//! with `sb_last_error_message`.
//!
//! Ownership: values returned through `*mut` out-parameters belong to the
//! caller and must be released with the matching `*_free` function; strings
//! with `sb_string_free`.
//!
//! Handles are null-checked, but pointer validity beyond that is the C
//! caller's contract, as usual for a C API.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use superbolic::cli::{body_to_disk, plot_body};
use superbolic::error::Error;
use superbolic::geodesic::{distance, foot, through, Geodesic};
use superbolic::grassmann::Supernumber;
use superbolic::minkowski::{classify, inner, to_upper_half_plane, SuperVector};
use superbolic::pairs::{classify_pair, common_perpendicular, intersect};
use superbolic::scalar::AnalyticTag;
use superbolic::selftest::{run_all, SelftestConfig};
use superbolic::trig::{triangle_report, Triangle};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SbStatus {
    Ok = 0,
    /// Invalid argument (null pointer, bad UTF-8, bad JSON, parse error).
    InvalidArgument = 1,
    /// A domain precondition failed (zero body, branch point, wrong conic).
    DomainError = 2,
    /// The requested operation is unavailable for this scalar backend.
    Unsupported = 3,
    /// Geometry verdict errors (not parallel, no perpendicular, ambiguous).
    GeometryError = 4,
    /// Internal invariant violation.
    InternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SbStatus {
    use Error::*;
    match err {
        ParseError { .. } | JsonError(_) | OptionError(_) | ContextMismatch(_) => {
            SbStatus::InvalidArgument
        }
        NonInvertible
        | DomainError { .. }
        | ParityViolation(_)
        | GradingViolation(_)
        | DeterminantNotOne { .. }
        | NotOnIh { .. }
        | NotLightlike { .. }
        | ScaleMismatch(_)
        | CoincidentBodies
        | PointOnLine
        | DegenerateTriangle(_) => SbStatus::DomainError,
        AnalyticUnsupported { .. } => SbStatus::Unsupported,
        NotParallel(_)
        | UltraparallelNoPerpendicular(_)
        | NotIntersecting
        | ConditionResidualAmbiguous(_)
        | NonGeneric(_)
        | DegenerateFrame(_)
        | IllConditioned(_) => SbStatus::GeometryError,
        ShapeError(_) | InvariantViolation(_) | ResidualTooLarge(_) | SamplerExhausted(_) => {
            SbStatus::InternalError
        }
    }
}

fn fail(err: Error) -> SbStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

fn invalid(message: &str) -> SbStatus {
    set_error(message);
    SbStatus::InvalidArgument
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SbStatus> {
    if ptr.is_null() {
        return Err(invalid("null string pointer"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid("string is not valid UTF-8"))
}

fn give_string(s: String, out: *mut *mut c_char) -> SbStatus {
    if out.is_null() {
        return invalid("null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SbStatus::Ok
        }
        Err(_) => invalid("result contained an interior NUL"),
    }
}

macro_rules! give_handle {
    ($value:expr, $out:ident, $ty:ty) => {{
        if $out.is_null() {
            return invalid("null output pointer");
        }
        unsafe { *$out = Box::into_raw(Box::new($value)) as *mut $ty };
        SbStatus::Ok
    }};
}

macro_rules! ensure_same_gens {
    ($a:expr, $b:expr) => {
        if $a != $b {
            return fail(Error::ContextMismatch(format!(
                "N = {} vs N = {}",
                $a, $b
            )));
        }
    };
}

macro_rules! borrow {
    ($ptr:expr, $ty:ty) => {{
        if $ptr.is_null() {
            return invalid("null handle");
        }
        unsafe { &*($ptr as *const $ty) }
    }};
}

/// Opaque supernumber handle (f64 coefficients).
pub struct SbSupernumber(Supernumber<f64>);
/// Opaque super Minkowski point handle.
pub struct SbVector(SuperVector<f64>);
/// Opaque supergeodesic handle.
pub struct SbGeodesic(Geodesic<f64>);

/// Copy the last error message into `buf` (NUL-terminated, truncating);
/// returns the full message length in bytes.
#[no_mangle]
pub extern "C" fn sb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len() - 1
    })
}

/// Release a string returned by this library.
#[no_mangle]
pub extern "C" fn sb_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            let _ = CString::from_raw(s);
        }
    }
}

// ---------------------------------------------------------------------------
// supernumbers
// ---------------------------------------------------------------------------

/// Parse a supernumber from the text form (e.g. `2.5 + 1*e[1,2]`) or from
/// the canonical JSON.
#[no_mangle]
pub extern "C" fn sb_supernumber_parse(
    gens: u8,
    text: *const c_char,
    out: *mut *mut SbSupernumber,
) -> SbStatus {
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let parsed = match serde_json::from_str::<serde_json::Value>(text) {
        Ok(v) => Supernumber::from_json(gens, &v),
        Err(_) => Supernumber::parse(gens, text),
    };
    match parsed {
        Ok(v) => give_handle!(SbSupernumber(v), out, SbSupernumber),
        Err(e) => fail(e),
    }
}

#[no_mangle]
pub extern "C" fn sb_supernumber_free(v: *mut SbSupernumber) {
    if !v.is_null() {
        unsafe {
            let _ = Box::from_raw(v);
        }
    }
}

#[no_mangle]
pub extern "C" fn sb_supernumber_clone(
    v: *const SbSupernumber,
    out: *mut *mut SbSupernumber,
) -> SbStatus {
    let v = borrow!(v, SbSupernumber);
    give_handle!(SbSupernumber(v.0.clone()), out, SbSupernumber)
}

/// Canonical text form.
#[no_mangle]
pub extern "C" fn sb_supernumber_to_text(
    v: *const SbSupernumber,
    out: *mut *mut c_char,
) -> SbStatus {
    let v = borrow!(v, SbSupernumber);
    give_string(v.0.to_text(), out)
}

/// Canonical JSON form.
#[no_mangle]
pub extern "C" fn sb_supernumber_to_json(
    v: *const SbSupernumber,
    out: *mut *mut c_char,
) -> SbStatus {
    let v = borrow!(v, SbSupernumber);
    give_string(v.0.to_json().to_string(), out)
}

/// Body (unit-monomial coefficient).
#[no_mangle]
pub extern "C" fn sb_supernumber_body(v: *const SbSupernumber, out: *mut f64) -> SbStatus {
    let v = borrow!(v, SbSupernumber);
    if out.is_null() {
        return invalid("null output pointer");
    }
    unsafe { *out = v.0.body() };
    SbStatus::Ok
}

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SbBinaryOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
}

#[no_mangle]
pub extern "C" fn sb_supernumber_binop(
    op: SbBinaryOp,
    a: *const SbSupernumber,
    b: *const SbSupernumber,
    out: *mut *mut SbSupernumber,
) -> SbStatus {
    let a = borrow!(a, SbSupernumber);
    let b = borrow!(b, SbSupernumber);
    ensure_same_gens!(a.0.gens(), b.0.gens());
    let result = match op {
        SbBinaryOp::Add => a.0.checked_add(&b.0),
        SbBinaryOp::Sub => a.0.checked_sub(&b.0),
        SbBinaryOp::Mul => a.0.checked_mul(&b.0),
    };
    match result {
        Ok(v) => give_handle!(SbSupernumber(v), out, SbSupernumber),
        Err(e) => fail(e),
    }
}

/// Geometric-series inverse; fails when the body is zero.
#[no_mangle]
pub extern "C" fn sb_supernumber_invert(
    v: *const SbSupernumber,
    out: *mut *mut SbSupernumber,
) -> SbStatus {
    let v = borrow!(v, SbSupernumber);
    match v.0.invert() {
        Ok(r) => give_handle!(SbSupernumber(r), out, SbSupernumber),
        Err(e) => fail(e),
    }
}

/// Analytic lift by tag name (`sqrt`, `exp`, `ln`, `cosh`, `sinh`, `tanh`,
/// `cos`, `sin`, `arccosh`, `arcsinh`, `arctanh`, `arccos`).
#[no_mangle]
pub extern "C" fn sb_supernumber_apply(
    v: *const SbSupernumber,
    tag: *const c_char,
    out: *mut *mut SbSupernumber,
) -> SbStatus {
    let v = borrow!(v, SbSupernumber);
    let tag = match unsafe { read_str(tag) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let tag: AnalyticTag = match tag.parse() {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match v.0.apply(tag) {
        Ok(r) => give_handle!(SbSupernumber(r), out, SbSupernumber),
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// points and geodesics
// ---------------------------------------------------------------------------

/// Parse a point from `{"x1":...,"x2":...,"y":...,"phi":...,"psi":...}`.
#[no_mangle]
pub extern "C" fn sb_vector_from_json(
    gens: u8,
    json: *const c_char,
    out: *mut *mut SbVector,
) -> SbStatus {
    let text = match unsafe { read_str(json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return invalid(&format!("invalid JSON: {e}")),
    };
    match SuperVector::from_json(gens, &value) {
        Ok(v) => give_handle!(SbVector(v), out, SbVector),
        Err(e) => fail(e),
    }
}

#[no_mangle]
pub extern "C" fn sb_vector_free(v: *mut SbVector) {
    if !v.is_null() {
        unsafe {
            let _ = Box::from_raw(v);
        }
    }
}

#[no_mangle]
pub extern "C" fn sb_vector_to_json(v: *const SbVector, out: *mut *mut c_char) -> SbStatus {
    let v = borrow!(v, SbVector);
    give_string(v.0.to_json().to_string(), out)
}

/// Super Minkowski pairing of two points, as a supernumber handle.
#[no_mangle]
pub extern "C" fn sb_inner(
    p: *const SbVector,
    q: *const SbVector,
    out: *mut *mut SbSupernumber,
) -> SbStatus {
    let p = borrow!(p, SbVector);
    let q = borrow!(q, SbVector);
    if p.0.gens() != q.0.gens() {
        return fail(Error::ContextMismatch(format!(
            "N = {} vs N = {}",
            p.0.gens(),
            q.0.gens()
        )));
    }
    give_handle!(SbSupernumber(inner(&p.0, &q.0)), out, SbSupernumber)
}

/// Conic classification as JSON `{"tag":...,"residual":...}`.
#[no_mangle]
pub extern "C" fn sb_classify(p: *const SbVector, tol: f64, out: *mut *mut c_char) -> SbStatus {
    let p = borrow!(p, SbVector);
    give_string(classify(&p.0, tol).to_json().to_string(), out)
}

/// Parse a geodesic from `{"u":...,"v":...}` or
/// `{"e":...,"f":...,"normalize":bool}`.
#[no_mangle]
pub extern "C" fn sb_geodesic_from_json(
    gens: u8,
    json: *const c_char,
    tol: f64,
    out: *mut *mut SbGeodesic,
) -> SbStatus {
    let text = match unsafe { read_str(json) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return invalid(&format!("invalid JSON: {e}")),
    };
    match Geodesic::from_json(gens, &value, tol) {
        Ok(l) => give_handle!(SbGeodesic(l), out, SbGeodesic),
        Err(e) => fail(e),
    }
}

#[no_mangle]
pub extern "C" fn sb_geodesic_free(l: *mut SbGeodesic) {
    if !l.is_null() {
        unsafe {
            let _ = Box::from_raw(l);
        }
    }
}

#[no_mangle]
pub extern "C" fn sb_geodesic_to_json(l: *const SbGeodesic, out: *mut *mut c_char) -> SbStatus {
    let l = borrow!(l, SbGeodesic);
    give_string(l.0.to_json().to_string(), out)
}

/// The unique geodesic through two points, origin at the first.
#[no_mangle]
pub extern "C" fn sb_through(
    p: *const SbVector,
    q: *const SbVector,
    tol: f64,
    out: *mut *mut SbGeodesic,
) -> SbStatus {
    let p = borrow!(p, SbVector);
    let q = borrow!(q, SbVector);
    ensure_same_gens!(p.0.gens(), q.0.gens());
    match through(&p.0, &q.0, tol) {
        Ok(l) => give_handle!(SbGeodesic(l), out, SbGeodesic),
        Err(e) => fail(e),
    }
}

/// Distance data `{"cosh_d":...,"d":...}`; `d` is null at the branch point.
#[no_mangle]
pub extern "C" fn sb_distance(
    p: *const SbVector,
    q: *const SbVector,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let p = borrow!(p, SbVector);
    let q = borrow!(q, SbVector);
    ensure_same_gens!(p.0.gens(), q.0.gens());
    match distance(&p.0, &q.0, tol) {
        Ok(d) => give_string(d.to_json().to_string(), out),
        Err(e) => fail(e),
    }
}

/// Orthogonal projection onto a geodesic:
/// `{"foot":...,"perp":...,"dist":...,"tanh_param":...}`.
#[no_mangle]
pub extern "C" fn sb_foot(
    p: *const SbVector,
    line: *const SbGeodesic,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let p = borrow!(p, SbVector);
    let line = borrow!(line, SbGeodesic);
    ensure_same_gens!(p.0.gens(), line.0.gens());
    match foot(&p.0, &line.0, tol) {
        Ok(r) => give_string(
            serde_json::json!({
                "foot": r.foot.to_json(),
                "perp": r.perp.to_json(),
                "dist": r.dist.to_json(),
                "tanh_param": r.tanh_param.to_json(),
            })
            .to_string(),
            out,
        ),
        Err(e) => fail(e),
    }
}

/// Triangle report JSON for three vertices.
#[no_mangle]
pub extern "C" fn sb_triangle_report(
    a: *const SbVector,
    b: *const SbVector,
    c: *const SbVector,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let a = borrow!(a, SbVector);
    let b = borrow!(b, SbVector);
    let c = borrow!(c, SbVector);
    ensure_same_gens!(a.0.gens(), b.0.gens());
    ensure_same_gens!(a.0.gens(), c.0.gens());
    let triangle = match Triangle::new(a.0.clone(), b.0.clone(), c.0.clone(), tol) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match triangle_report(&triangle, tol) {
        Ok(r) => give_string(r.to_json().to_string(), out),
        Err(e) => fail(e),
    }
}

/// Intersection verdict JSON for a geodesic pair.
#[no_mangle]
pub extern "C" fn sb_intersect(
    l1: *const SbGeodesic,
    l2: *const SbGeodesic,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let l1 = borrow!(l1, SbGeodesic);
    let l2 = borrow!(l2, SbGeodesic);
    ensure_same_gens!(l1.0.gens(), l2.0.gens());
    match intersect(&l1.0, &l2.0, tol) {
        Ok(v) => give_string(v.to_json().to_string(), out),
        Err(e) => fail(e),
    }
}

/// Common perpendicular verdict JSON for a parallel pair.
#[no_mangle]
pub extern "C" fn sb_common_perpendicular(
    l1: *const SbGeodesic,
    l2: *const SbGeodesic,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let l1 = borrow!(l1, SbGeodesic);
    let l2 = borrow!(l2, SbGeodesic);
    ensure_same_gens!(l1.0.gens(), l2.0.gens());
    match common_perpendicular(&l1.0, &l2.0, tol) {
        Ok(v) => give_string(v.to_json().to_string(), out),
        Err(e) => fail(e),
    }
}

/// Full pair classification JSON.
#[no_mangle]
pub extern "C" fn sb_classify_pair(
    l1: *const SbGeodesic,
    l2: *const SbGeodesic,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let l1 = borrow!(l1, SbGeodesic);
    let l2 = borrow!(l2, SbGeodesic);
    ensure_same_gens!(l1.0.gens(), l2.0.gens());
    match classify_pair(&l1.0, &l2.0, tol) {
        Ok(v) => give_string(v.to_json().to_string(), out),
        Err(e) => fail(e),
    }
}

/// Upper half-plane image `{"z":...,"theta":...}` (complex coefficients).
#[no_mangle]
pub extern "C" fn sb_map_uhp(p: *const SbVector, tol: f64, out: *mut *mut c_char) -> SbStatus {
    let p = borrow!(p, SbVector);
    match to_upper_half_plane(&p.0, tol) {
        Ok((z, theta)) => give_string(
            serde_json::json!({ "z": z.to_json(), "theta": theta.to_json() }).to_string(),
            out,
        ),
        Err(e) => fail(e),
    }
}

/// Poincare-disk body coordinates of a point of IH.
#[no_mangle]
pub extern "C" fn sb_body_to_disk(
    p: *const SbVector,
    tol: f64,
    px: *mut f64,
    py: *mut f64,
) -> SbStatus {
    let p = borrow!(p, SbVector);
    if px.is_null() || py.is_null() {
        return invalid("null output pointer");
    }
    match body_to_disk(&p.0, tol) {
        Ok(d) => {
            unsafe {
                *px = d.px;
                *py = d.py;
            }
            SbStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Sample a geodesic's body curve; returns CSV text `t,px,py`.
#[no_mangle]
pub extern "C" fn sb_plot_body(
    line: *const SbGeodesic,
    samples: u32,
    t_min: f64,
    t_max: f64,
    tol: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    let line = borrow!(line, SbGeodesic);
    match plot_body(&line.0, samples, t_min, t_max, tol) {
        Ok(rows) => {
            let mut csv = String::from("t,px,py\n");
            for (t, d) in rows {
                csv.push_str(&format!("{t},{},{}\n", d.px, d.py));
            }
            give_string(csv, out)
        }
        Err(e) => fail(e),
    }
}

/// Run the property suites; returns the JSON summary and `Ok` only when all
/// suites passed.
#[no_mangle]
pub extern "C" fn sb_selftest(
    gens: u8,
    trials: u32,
    seed: u64,
    fermionic_scale: f64,
    out: *mut *mut c_char,
) -> SbStatus {
    if gens == 0 || gens > 16 {
        return invalid("gens must lie in 1..=16");
    }
    let cfg = SelftestConfig {
        gens,
        trials,
        seed,
        fermionic_scale,
    };
    let results = run_all(&cfg);
    let all_ok = results.iter().all(|r| r.passed);
    let json = serde_json::json!(results.iter().map(|r| r.to_json()).collect::<Vec<_>>());
    let status = give_string(json.to_string(), out);
    if status != SbStatus::Ok {
        return status;
    }
    if all_ok {
        SbStatus::Ok
    } else {
        set_error("one or more self-test suites failed");
        SbStatus::InternalError
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
        sb_string_free(ptr);
        s
    }

    #[test]
    fn supernumber_round_trip_and_errors() {
        unsafe {
            let mut v: *mut SbSupernumber = ptr::null_mut();
            let text = cstr("2.5 + 1*e[1,2]");
            assert_eq!(sb_supernumber_parse(8, text.as_ptr(), &mut v), SbStatus::Ok);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(sb_supernumber_to_text(v, &mut out), SbStatus::Ok);
            assert_eq!(take_string(out), "2.5 + 1*e[1,2]");
            let mut body = 0.0;
            assert_eq!(sb_supernumber_body(v, &mut body), SbStatus::Ok);
            assert_eq!(body, 2.5);

            let mut inv: *mut SbSupernumber = ptr::null_mut();
            assert_eq!(sb_supernumber_invert(v, &mut inv), SbStatus::Ok);
            let mut prod: *mut SbSupernumber = ptr::null_mut();
            assert_eq!(
                sb_supernumber_binop(SbBinaryOp::Mul, v, inv, &mut prod),
                SbStatus::Ok
            );
            let mut body = 0.0;
            sb_supernumber_body(prod, &mut body);
            assert!((body - 1.0).abs() < 1e-15);
            sb_supernumber_free(v);
            sb_supernumber_free(inv);
            sb_supernumber_free(prod);

            // parse error surfaces as InvalidArgument with a message
            let bad = cstr("1*e[2,1]");
            let mut v: *mut SbSupernumber = ptr::null_mut();
            assert_eq!(
                sb_supernumber_parse(8, bad.as_ptr(), &mut v),
                SbStatus::InvalidArgument
            );
            let mut buf = [0 as c_char; 128];
            let n = sb_last_error_message(buf.as_mut_ptr(), buf.len());
            assert!(n > 0);
        }
    }

    #[test]
    fn geometry_round_trip() {
        unsafe {
            let mut p: *mut SbVector = ptr::null_mut();
            let base = cstr(r#"{"x1":1,"x2":1,"y":0,"phi":0,"psi":0}"#);
            assert_eq!(sb_vector_from_json(6, base.as_ptr(), &mut p), SbStatus::Ok);
            let q_json = format!(
                r#"{{"x1":{},"x2":{},"y":0,"phi":0,"psi":0}}"#,
                1f64.exp(),
                (-1f64).exp()
            );
            let q_json = cstr(&q_json);
            let mut q: *mut SbVector = ptr::null_mut();
            assert_eq!(sb_vector_from_json(6, q_json.as_ptr(), &mut q), SbStatus::Ok);

            let mut d: *mut c_char = ptr::null_mut();
            assert_eq!(sb_distance(p, q, 1e-9, &mut d), SbStatus::Ok);
            let d_json: serde_json::Value = serde_json::from_str(&take_string(d)).unwrap();
            let cosh_d = d_json["cosh_d"]["terms"][0]["c"].as_f64().unwrap();
            assert!((cosh_d - 1f64.cosh()).abs() < 1e-12);

            let mut l: *mut SbGeodesic = ptr::null_mut();
            assert_eq!(sb_through(p, q, 1e-9, &mut l), SbStatus::Ok);
            let mut px = 0.0;
            let mut py = 0.0;
            assert_eq!(sb_body_to_disk(q, 1e-9, &mut px, &mut py), SbStatus::Ok);
            assert!((px - 0.5f64.tanh()).abs() < 1e-12);

            // intersection of the standard pair through the base point
            let y_line = cstr(
                r#"{"u":{"x1":1,"x2":1,"y":0,"phi":0,"psi":0},"v":{"x1":0,"x2":0,"y":1,"phi":0,"psi":0}}"#,
            );
            let mut l2: *mut SbGeodesic = ptr::null_mut();
            assert_eq!(
                sb_geodesic_from_json(6, y_line.as_ptr(), 1e-9, &mut l2),
                SbStatus::Ok
            );
            let mut verdict: *mut c_char = ptr::null_mut();
            assert_eq!(sb_intersect(l, l2, 1e-9, &mut verdict), SbStatus::Ok);
            let v_json: serde_json::Value = serde_json::from_str(&take_string(verdict)).unwrap();
            assert_eq!(v_json["tag"], "intersecting");

            // perpendicular on an intersecting pair is a geometry error
            let mut perp: *mut c_char = ptr::null_mut();
            assert_eq!(
                sb_common_perpendicular(l, l2, 1e-9, &mut perp),
                SbStatus::GeometryError
            );

            // mismatched generator contexts are rejected, not a crash
            let other = cstr(r#"{"x1":1,"x2":1,"y":0,"phi":0,"psi":0}"#);
            let mut p4: *mut SbVector = ptr::null_mut();
            assert_eq!(sb_vector_from_json(4, other.as_ptr(), &mut p4), SbStatus::Ok);
            let mut d: *mut c_char = ptr::null_mut();
            assert_eq!(sb_distance(p, p4, 1e-9, &mut d), SbStatus::InvalidArgument);
            sb_vector_free(p4);

            sb_geodesic_free(l);
            sb_geodesic_free(l2);
            sb_vector_free(p);
            sb_vector_free(q);
        }
    }
}
