//! C interface to `heat-ansatz`.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `ha_*_new`/`ha_*_parse` call and released by the matching `ha_*_free`.
//! Fallible calls return an [`HaStatus`] and write results through out
//! pointers; on failure the message is kept per thread and read back with
//! [`ha_last_error`]. Strings returned by the library are owned by the caller
//! and must be released with [`ha_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heat_ansatz::ansatz::{AnsatzSpec, Parity, PhiTable};
use heat_ansatz::dynsys::{parse_poles, RationalH};
use heat_ansatz::grpoly::{Family, GradedPoly};
use heat_ansatz::operators::compute_dk;
use heat_ansatz::scalar::parse_rational;
use heat_ansatz::solution::{
    assemble_psi, cole_hopf, heat_residual_series, BurgersSolution, HSource, SeriesSolution,
};
use heat_ansatz::verify::{run_suite, Suite};
use heat_ansatz::{Error, Rational};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Variable family of a polynomial.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaFamily {
    /// jets `y_k = h^(k-1)`
    Y = 0,
    /// ansatz parameters `x_2, x_3, …`
    X = 1,
    /// jet polynomials `D_1, D_2, …`
    D = 2,
}

impl From<HaFamily> for Family {
    fn from(f: HaFamily) -> Family {
        match f {
            HaFamily::Y => Family::Y,
            HaFamily::X => Family::X,
            HaFamily::D => Family::D,
        }
    }
}

/// Opaque polynomial with exact rational coefficients.
pub struct HaPoly(GradedPoly);

/// Opaque coefficient table `Φ_0..Φ_q`.
pub struct HaTable(PhiTable);

/// Opaque series solution together with its Cole–Hopf image.
pub struct HaSeries {
    heat: SeriesSolution,
    burgers: BurgersSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(HaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match e {
            Error::Parse(_) => HaStatus::Parse,
            _ => HaStatus::Domain,
        };
        Fail(status, e.to_string())
    }
}

type Step<T> = std::result::Result<T, Fail>;

fn guard<F: FnOnce() -> Step<()>>(f: F) -> HaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HaStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Step<&'a str> {
    if p.is_null() {
        return Err(Fail(HaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Step<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| Fail(HaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Step<&'a T> {
    p.as_ref()
        .ok_or_else(|| Fail(HaStatus::NullPointer, format!("{what} is null")))
}

fn parity(delta: u32) -> Step<Parity> {
    Ok(Parity::from_delta(delta as i64)?)
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Copies the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len`). Returns the full message length, 0 if there is none.
#[no_mangle]
pub unsafe extern "C" fn ha_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ha_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ha_poly_parse(
    src: *const c_char,
    family: HaFamily,
    result: *mut *mut HaPoly,
) -> HaStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let p = GradedPoly::parse(text(src, "src")?, family.into())?;
        *slot = Box::into_raw(Box::new(HaPoly(p)));
        Ok(())
    })
}

/// `D_k` as a polynomial in the jets, `k ≥ 1`.
#[no_mangle]
pub unsafe extern "C" fn ha_poly_dk(k: u32, result: *mut *mut HaPoly) -> HaStatus {
    guard(|| {
        let slot = out(result, "result")?;
        if k == 0 {
            return Err(Fail(HaStatus::OutOfRange, "k must be at least 1".into()));
        }
        let d = compute_dk(k as usize).pop().expect("k >= 1");
        *slot = Box::into_raw(Box::new(HaPoly(d)));
        Ok(())
    })
}

/// Text form of a polynomial; release with [`ha_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ha_poly_to_string(p: *const HaPoly, result: *mut *mut c_char) -> HaStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = owned_string(handle(p, "poly")?.0.to_string());
        Ok(())
    })
}

/// JSON form of a polynomial; release with [`ha_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ha_poly_to_json(p: *const HaPoly, result: *mut *mut c_char) -> HaStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = owned_string(handle(p, "poly")?.0.to_json());
        Ok(())
    })
}

/// Evaluates at `point[0..len]` (values of the variables in order).
#[no_mangle]
pub unsafe extern "C" fn ha_poly_eval(
    p: *const HaPoly,
    point: *const f64,
    len: usize,
    result: *mut f64,
) -> HaStatus {
    guard(|| {
        let poly = handle(p, "poly")?;
        let slot = out(result, "result")?;
        let values: &[f64] = if len == 0 {
            &[]
        } else if point.is_null() {
            return Err(Fail(HaStatus::NullPointer, "point is null".into()));
        } else {
            std::slice::from_raw_parts(point, len)
        };
        *slot = poly.0.eval(values)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ha_poly_free(p: *mut HaPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Coefficient table of the reduced n-ansatz with top polynomial `pn`
/// (in `x_2..x_n`), parity `delta`, entries `0..=q_max`.
#[no_mangle]
pub unsafe extern "C" fn ha_table_reduced(
    n: u32,
    delta: u32,
    pn: *const c_char,
    q_max: u32,
    result: *mut *mut HaTable,
) -> HaStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let top = GradedPoly::parse(text(pn, "pn")?, Family::X)?;
        let spec = AnsatzSpec::reduced(n as usize, parity(delta)?, top)?;
        *slot = Box::into_raw(Box::new(HaTable(spec.phi_table(q_max as usize)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ha_table_len(t: *const HaTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.entries().len())
}

/// Copy of entry `k`; free it with [`ha_poly_free`].
#[no_mangle]
pub unsafe extern "C" fn ha_table_entry(
    t: *const HaTable,
    k: usize,
    result: *mut *mut HaPoly,
) -> HaStatus {
    guard(|| {
        let table = handle(t, "table")?;
        let slot = out(result, "result")?;
        let p = table
            .0
            .get(k)
            .ok_or_else(|| Fail(HaStatus::OutOfRange, format!("no entry {k}")))?;
        *slot = Box::into_raw(Box::new(HaPoly(p.clone())));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ha_table_free(t: *mut HaTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Series solution of the reduced n-ansatz for a rational profile given by
/// `poles` (`"a:b,c:d"`), constant `r0` (rational text), truncated after `order` terms.
#[no_mangle]
pub unsafe extern "C" fn ha_series_new(
    n: u32,
    delta: u32,
    pn: *const c_char,
    poles: *const c_char,
    r0: *const c_char,
    order: u32,
    result: *mut *mut HaSeries,
) -> HaStatus {
    guard(|| {
        let slot = out(result, "result")?;
        let top = GradedPoly::parse(text(pn, "pn")?, Family::X)?;
        let spec = AnsatzSpec::reduced(n as usize, parity(delta)?, top)?;
        let h = RationalH::new(parse_poles(text(poles, "poles")?)?)?;
        let r0 = parse_rational(text(r0, "r0")?)?;
        let heat = assemble_psi(&spec, HSource::Rational(h), r0, order as usize)?;
        let burgers = cole_hopf(&heat)?;
        *slot = Box::into_raw(Box::new(HaSeries { heat, burgers }));
        Ok(())
    })
}

/// `ψ(z, t)`.
#[no_mangle]
pub unsafe extern "C" fn ha_series_eval(
    s: *const HaSeries,
    z: f64,
    t: f64,
    result: *mut f64,
) -> HaStatus {
    guard(|| {
        let series = handle(s, "series")?;
        *out(result, "result")? = series.heat.eval(z, t)?;
        Ok(())
    })
}

/// Cole–Hopf image `w(z, t)` solving `w_t + w w_z = μ w_zz`; `mu` is rational text.
#[no_mangle]
pub unsafe extern "C" fn ha_series_burgers_eval(
    s: *const HaSeries,
    mu: *const c_char,
    z: f64,
    t: f64,
    result: *mut f64,
) -> HaStatus {
    guard(|| {
        let series = handle(s, "series")?;
        let slot = out(result, "result")?;
        let mu: Rational = parse_rational(text(mu, "mu")?)?;
        *slot = series.burgers.with_mu(mu)?.eval(z, t)?;
        Ok(())
    })
}

/// Sets `*is_zero` to 1 when the exact heat residual vanishes at every time
/// in `times` (comma-separated rationals), else 0.
#[no_mangle]
pub unsafe extern "C" fn ha_series_heat_residual_is_zero(
    s: *const HaSeries,
    times: *const c_char,
    is_zero: *mut i32,
) -> HaStatus {
    guard(|| {
        let series = handle(s, "series")?;
        let slot = out(is_zero, "is_zero")?;
        let samples = text(times, "times")?
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<heat_ansatz::Result<Vec<Rational>>>()?;
        let r = heat_residual_series(&series.heat, &samples)?;
        *slot = i32::from(*r.numer() == 0.into());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ha_series_free(s: *mut HaSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs a self-check suite (`operators`, `ansatz`, `dynsys`, `solution` or
/// `all`); `*failed` receives the number of failing checks.
#[no_mangle]
pub unsafe extern "C" fn ha_verify(suite: *const c_char, failed: *mut u32) -> HaStatus {
    guard(|| {
        let slot = out(failed, "failed")?;
        let suite: Suite = text(suite, "suite")?.parse()?;
        *slot = run_suite(suite).iter().filter(|c| !c.passed).count() as u32;
        Ok(())
    })
}
