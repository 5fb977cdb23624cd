//! C ABI over the `towercalc` engine.
//!
//! Every function returns a [`TcStatus`]; results come back through out
//! parameters. Strings returned by the library must be released with
//! [`tc_string_free`], towers with [`tc_tower_free`]. The message for the
//! most recent failure on the calling thread is available from
//! [`tc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use towercalc::cli::{self, Outcome, TowerScript};
use towercalc::spectral::{char_poly, spectral_radius, IntMatrix};
use towercalc::{Error, Tower};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    BasisMismatch = 4,
    Precondition = 5,
    Overflow = 6,
    Internal = 7,
}

/// Opaque handle to a parsed script and its built tower.
pub struct TcTower {
    script: TowerScript,
    tower: Tower,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::Parse { .. } | Error::UnknownLabel { .. } => TcStatus::Parse,
        Error::BasisMismatch => TcStatus::BasisMismatch,
        Error::Overflow(_) => TcStatus::Overflow,
        _ => TcStatus::Precondition,
    }
}

fn guard(f: impl FnOnce() -> Result<(), TcStatus>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TcStatus::Internal
        }
    }
}

fn fail(e: Error) -> TcStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TcStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(TcStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        TcStatus::InvalidUtf8
    })
}

fn check_out<T>(p: *mut T) -> Result<(), TcStatus> {
    if p.is_null() {
        set_error("null output pointer");
        Err(TcStatus::NullPointer)
    } else {
        Ok(())
    }
}

unsafe fn tower_ref<'a>(t: *const TcTower) -> Result<&'a TcTower, TcStatus> {
    t.as_ref().ok_or_else(|| {
        set_error("null tower handle");
        TcStatus::NullPointer
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn read_matrix(entries: *const i64, n: usize) -> Result<IntMatrix, TcStatus> {
    if entries.is_null() && n > 0 {
        set_error("null matrix pointer");
        return Err(TcStatus::NullPointer);
    }
    let len = n.checked_mul(n).ok_or(TcStatus::Overflow)?;
    let flat: &[i64] = if n == 0 { &[] } else { std::slice::from_raw_parts(entries, len) };
    let rows: Vec<Vec<i64>> = flat.chunks(n.max(1)).map(<[i64]>::to_vec).collect();
    IntMatrix::from_i64(&rows).map_err(fail)
}

/// Parses a tower script and builds every level.
///
/// # Safety
/// `script` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tower_from_script(script: *const c_char, out: *mut *mut TcTower) -> TcStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(script)?;
        let script = cli::parse_tower_file(text).map_err(fail)?;
        let tower = script.build().map_err(fail)?;
        *out = Box::into_raw(Box::new(TcTower { script, tower }));
        Ok(())
    })
}

/// # Safety
/// `tower` must come from [`tc_tower_from_script`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_tower_free(tower: *mut TcTower) {
    if !tower.is_null() {
        drop(Box::from_raw(tower));
    }
}

/// Number of levels `X_0 .. X_n`, i.e. blowup steps plus one.
///
/// # Safety
/// `tower` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tower_num_levels(tower: *const TcTower, out: *mut usize) -> TcStatus {
    guard(|| {
        check_out(out)?;
        *out = tower_ref(tower)?.tower.levels().len();
        Ok(())
    })
}

/// Rank of `H^{1,1}` (equal to that of `H^{2,2}`) at `level`.
///
/// # Safety
/// `tower` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tower_rank(tower: *const TcTower, level: usize, out: *mut usize) -> TcStatus {
    guard(|| {
        check_out(out)?;
        let t = tower_ref(tower)?;
        let v = t.tower.level(level).ok_or_else(|| fail(Error::Precondition(format!("no level {level}"))))?;
        *out = v.rank();
        Ok(())
    })
}

/// Evaluates an intersection expression on `level` (negative for the top
/// level). The result is written as a newly allocated string.
///
/// # Safety
/// `tower` must be a live handle, `expr` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tower_eval(
    tower: *const TcTower,
    level: i64,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        check_out(out)?;
        let t = tower_ref(tower)?;
        let expr = read_str(expr)?;
        let level = usize::try_from(level).ok();
        let s = cli::cmd_eval(&t.script, expr, level).map_err(fail)?;
        *out = into_c_string(s.trim_end().to_string());
        Ok(())
    })
}

/// Runs check set 1 or 2 on every step and writes the JSON report.
/// `outcome` receives the CLI exit code: 0 all pass, 2 an assertion is
/// missing, 3 some step fails.
///
/// # Safety
/// `tower` must be a live handle; `out` and `outcome` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tower_check_json(
    tower: *const TcTower,
    theorem: u8,
    out: *mut *mut c_char,
    outcome: *mut i32,
) -> TcStatus {
    guard(|| {
        check_out(out)?;
        check_out(outcome)?;
        let t = tower_ref(tower)?;
        let (s, o): (String, Outcome) = cli::cmd_check(&t.script, theorem, true).map_err(fail)?;
        *out = into_c_string(s);
        *outcome = o.code();
        Ok(())
    })
}

/// Characteristic polynomial of the `n x n` row-major matrix `entries`;
/// writes the `n + 1` coefficients, constant term first, to `coeffs`.
///
/// # Safety
/// `entries` must hold `n * n` values and `coeffs` room for `n + 1`.
#[no_mangle]
pub unsafe extern "C" fn tc_char_poly(entries: *const i64, n: usize, coeffs: *mut i64) -> TcStatus {
    guard(|| {
        check_out(coeffs)?;
        let m = read_matrix(entries, n)?;
        let p = char_poly(&m);
        let vals = p
            .coeffs()
            .iter()
            .map(|c| c.to_i64())
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| fail(Error::Overflow("coefficient does not fit in 64 bits".into())))?;
        ptr::copy_nonoverlapping(vals.as_ptr(), coeffs, vals.len());
        Ok(())
    })
}

/// Certified spectral radius of the `n x n` row-major matrix `entries`.
///
/// # Safety
/// `entries` must hold `n * n` values; `value` and `error_bound` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_spectral_radius(
    entries: *const i64,
    n: usize,
    tol: f64,
    value: *mut f64,
    error_bound: *mut f64,
) -> TcStatus {
    guard(|| {
        check_out(value)?;
        check_out(error_bound)?;
        let m = read_matrix(entries, n)?;
        let r = spectral_radius(&m, tol).map_err(fail)?;
        *value = r.value;
        *error_bound = r.error_bound;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
