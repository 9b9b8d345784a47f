//! C ABI over the chiralis engine.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free`. Strings returned through out-pointers must
//! be released with [`chiralis_string_free`]. Every fallible call returns
//! a [`ChiralisStatus`]; the message for the last failure on the calling
//! thread is available from [`chiralis_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chiralis::cohomology::{cohomology_at, GradedPieceKey};
use chiralis::equivariant::{SgtModule, SubspaceKind};
use chiralis::expr::EvalContext;
use chiralis::fixtures::GammaChoice;
use chiralis::lie::LieAlgebraData;
use chiralis::theorems;
use chiralis::weil::WeilAlgebra;
use chiralis::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiralisStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// bad input: unknown Lie algebra, expression syntax, unknown name
    InvalidInput = 3,
    /// mixed grades or parities
    GradeError = 4,
    /// a theorem hypothesis does not hold for the given data
    HypothesisFailed = 5,
    /// the requested graded piece is infinite
    InfinitePiece = 6,
    Internal = 7,
}

/// W(g) together with its basic subcomplex.
pub struct ChiralisWeil {
    weil: WeilAlgebra,
    module: SgtModule,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ChiralisStatus {
    match e {
        Error::Spec(_)
        | Error::UnknownGenerator(_)
        | Error::InvalidLieData(_)
        | Error::Syntax { .. }
        | Error::UnknownName { .. }
        | Error::NoFixture(_) => ChiralisStatus::InvalidInput,
        Error::GradeMismatch(_) | Error::GradeError { .. } => ChiralisStatus::GradeError,
        Error::NotSemisimple | Error::NotFaithful | Error::NotAbelian | Error::HypothesisFailed(_) => {
            ChiralisStatus::HypothesisFailed
        }
        Error::InfinitePiece(_) => ChiralisStatus::InfinitePiece,
        _ => ChiralisStatus::Internal,
    }
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), ChiralisStatus>) -> ChiralisStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChiralisStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            ChiralisStatus::Internal
        }
    }
}

fn lift<T>(r: chiralis::Result<T>) -> Result<T, ChiralisStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ChiralisStatus> {
    if p.is_null() {
        set_error("null argument".into());
        return Err(ChiralisStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        ChiralisStatus::InvalidUtf8
    })
}

fn non_null<T>(p: *const T) -> Result<(), ChiralisStatus> {
    if p.is_null() {
        set_error("null argument".into());
        return Err(ChiralisStatus::NullArgument);
    }
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn chiralis_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn chiralis_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds W(g) for a builtin name (t1, sl2, ...) or a JSON file path.
///
/// # Safety
/// `lie` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chiralis_weil_new(lie: *const c_char, out: *mut *mut ChiralisWeil) -> ChiralisStatus {
    guard(|| {
        non_null(out)?;
        let name = read_str(lie)?;
        let l = lift(LieAlgebraData::load(name))?;
        let weil = lift(WeilAlgebra::build(&l))?;
        let module = SgtModule::from_weil(&weil);
        *out = Box::into_raw(Box::new(ChiralisWeil { weil, module }));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle from [`chiralis_weil_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chiralis_weil_free(h: *mut ChiralisWeil) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of generators of the underlying free-field algebra.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chiralis_weil_generator_count(h: *const ChiralisWeil, out: *mut usize) -> ChiralisStatus {
    guard(|| {
        non_null(h)?;
        non_null(out)?;
        *out = (*h).weil.algebra.len();
        Ok(())
    })
}

/// Evaluates an expression in W(g) and returns the normally ordered state.
///
/// # Safety
/// `h` must be a live handle, `expr` a NUL-terminated string and `out` a
/// valid pointer. The result must be released with [`chiralis_string_free`].
#[no_mangle]
pub unsafe extern "C" fn chiralis_weil_eval(
    h: *const ChiralisWeil,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> ChiralisStatus {
    guard(|| {
        non_null(h)?;
        non_null(out)?;
        let text = read_str(expr)?;
        let w = &(*h).weil;
        let s = lift(EvalContext::weil(w).eval_str(text))?;
        *out = to_c(w.algebra.format_state(&s));
        Ok(())
    })
}

/// dim H of the basic subcomplex of W(g) at (degree, weight).
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chiralis_weil_basic_dim_h(
    h: *const ChiralisWeil,
    degree: i32,
    weight: i32,
    out: *mut usize,
) -> ChiralisStatus {
    guard(|| {
        non_null(h)?;
        non_null(out)?;
        let spec = (*h).module.complex(SubspaceKind::Basic);
        *out = lift(cohomology_at(&spec, GradedPieceKey::new(degree, weight)))?.dim_h;
        Ok(())
    })
}

/// Checks the linear representation theorem for `rep` of `lie`. `gamma_bc`
/// selects the bc system for the auxiliary fields instead of βγ. Writes 1
/// to `passed` when every check holds.
///
/// # Safety
/// `lie` and `rep` must be NUL-terminated strings and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chiralis_verify_linear_rep(
    lie: *const c_char,
    rep: *const c_char,
    gamma_bc: bool,
    passed: *mut i32,
) -> ChiralisStatus {
    guard(|| {
        non_null(passed)?;
        let l = lift(LieAlgebraData::load(read_str(lie)?))?;
        let choice = if gamma_bc { GammaChoice::BC } else { GammaChoice::BetaGamma };
        let r = lift(theorems::verify_linear_rep(&l, read_str(rep)?, choice))?;
        *passed = r.passed as i32;
        Ok(())
    })
}
