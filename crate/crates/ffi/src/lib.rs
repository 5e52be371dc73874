//! C interface. Every entry point returns an `EmzvStatus`; results come
//! back through out-parameters. Strings handed out by the library are
//! NUL-terminated UTF-8 (JSON documents unless noted) and must be released
//! with `emzv_string_free`. After a failure, `emzv_last_error` describes it
//! on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use emzv::decomp::{EmzvIndex, Engine};
use emzv::derlie::{find_relations_among, fourier_membership, lyndon_candidates, uu_dual_membership};
use emzv::doc;
use emzv::{EPoly, Error, MzvTable};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmzvStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ConsistencyError = 4,
    TableOverflow = 5,
    DimensionMismatch = 6,
    DegreeMismatch = 7,
    PreconditionViolated = 8,
    ExtractionInconsistent = 9,
    FourierViolation = 10,
    TruncationOverflow = 11,
    Panic = 12,
}

impl From<&Error> for EmzvStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) => EmzvStatus::ParseError,
            Error::Consistency(_) => EmzvStatus::ConsistencyError,
            Error::TableOverflow { .. } => EmzvStatus::TableOverflow,
            Error::DimensionMismatch(_) => EmzvStatus::DimensionMismatch,
            Error::DegreeMismatch(..) => EmzvStatus::DegreeMismatch,
            Error::PreconditionViolated(_) => EmzvStatus::PreconditionViolated,
            Error::ExtractionInconsistent(_) => EmzvStatus::ExtractionInconsistent,
            Error::FourierViolation(_) => EmzvStatus::FourierViolation,
            Error::TruncationOverflow { .. } => EmzvStatus::TruncationOverflow,
        }
    }
}

/// Opaque handle: an MZV table plus the decomposition cache built on it.
/// Not safe to share between threads without external locking.
pub struct EmzvContext {
    engine: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(EmzvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail((&e).into(), format!("{}: {e}", e.name()))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EmzvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EmzvStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("Panic: internal error".into());
            EmzvStatus::Panic
        }
    }
}

unsafe fn arg_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(EmzvStatus::NullArgument, format!("NullArgument: {what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(EmzvStatus::InvalidUtf8, format!("InvalidUtf8: {what}")))
}

unsafe fn ctx_ref<'a>(ctx: *const EmzvContext) -> Result<&'a EmzvContext, Fail> {
    ctx.as_ref().ok_or_else(|| Fail(EmzvStatus::NullArgument, "NullArgument: context is null".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(EmzvStatus::NullArgument, "NullArgument: output pointer is null".into()));
    }
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).unwrap().into_raw();
}

/// Context on the built-in weight-8 MZV table.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn emzv_context_new(out: *mut *mut EmzvContext) -> EmzvStatus {
    guard(|| {
        check_out(out)?;
        *out = Box::into_raw(Box::new(EmzvContext { engine: Engine::new(MzvTable::shipped()) }));
        Ok(())
    })
}

/// Context on the MZV table stored at `path`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn emzv_context_from_table(path: *const c_char, out: *mut *mut EmzvContext) -> EmzvStatus {
    guard(|| {
        check_out(out)?;
        let table = MzvTable::load_path(Path::new(arg_str(path, "path")?))?;
        *out = Box::into_raw(Box::new(EmzvContext { engine: Engine::new(table) }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from `emzv_context_new*` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn emzv_context_free(ctx: *mut EmzvContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Highest MZV weight the context's table covers.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn emzv_table_max_weight(ctx: *const EmzvContext, out: *mut u32) -> EmzvStatus {
    guard(|| {
        let ctx = ctx_ref(ctx)?;
        check_out(out)?;
        *out = ctx.engine.table().max_weight();
        Ok(())
    })
}

/// Decomposition of I(index) as an `emzv/decomposition/v1` document.
/// `index` is written like "0,1,0,0".
///
/// # Safety
/// `ctx` must be a live context, `index` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn emzv_decompose(ctx: *const EmzvContext, index: *const c_char, out: *mut *mut c_char) -> EmzvStatus {
    guard(|| {
        let ctx = ctx_ref(ctx)?;
        check_out(out)?;
        let i = EmzvIndex::parse(arg_str(index, "index")?)?;
        let d = ctx.engine.decompose(&i)?;
        put_string(out, doc::to_json(&doc::DecompositionDoc::new(&d)));
        Ok(())
    })
}

/// q-expansion of I(index) to `order` terms as a `qexp/v1` document.
///
/// # Safety
/// As for `emzv_decompose`.
#[no_mangle]
pub unsafe extern "C" fn emzv_qexp(
    ctx: *const EmzvContext,
    index: *const c_char,
    order: usize,
    out: *mut *mut c_char,
) -> EmzvStatus {
    guard(|| {
        let ctx = ctx_ref(ctx)?;
        check_out(out)?;
        let i = EmzvIndex::parse(arg_str(index, "index")?)?;
        let s = ctx.engine.emzv_qexp(&i, order)?;
        put_string(out, doc::to_json(&doc::QExpDoc::new(&i, &s)));
        Ok(())
    })
}

/// Constant term of I(index), as plain text such as "-3*pi*z3".
///
/// # Safety
/// As for `emzv_decompose`.
#[no_mangle]
pub unsafe extern "C" fn emzv_gamma(ctx: *const EmzvContext, index: *const c_char, out: *mut *mut c_char) -> EmzvStatus {
    guard(|| {
        let ctx = ctx_ref(ctx)?;
        check_out(out)?;
        let i = EmzvIndex::parse(arg_str(index, "index")?)?;
        put_string(out, ctx.engine.gamma(&i)?.to_string());
        Ok(())
    })
}

/// Relations among brackets of the eps_2k of total weight `weight` and
/// depth `depth` (letters at least `min_letter`), tested in the free Lie
/// algebra up to `lie_degree`. Returns a `lie-relations/v1` document.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn emzv_derlie_relations(
    weight: u32,
    depth: usize,
    min_letter: u32,
    lie_degree: usize,
    out: *mut *mut c_char,
) -> EmzvStatus {
    guard(|| {
        check_out(out)?;
        let cands = lyndon_candidates(weight, depth, min_letter);
        if cands.is_empty() {
            return Err(Error::PreconditionViolated("no candidates of that weight and depth".into()).into());
        }
        let r = find_relations_among(&cands, lie_degree)?;
        put_string(out, doc::to_json(&doc::LieRelationsDoc::new(&r)));
        Ok(())
    })
}

/// Sets `*out` to 1 if every homogeneous component of `epoly` kills the
/// relations among the eps_2k up to `lie_degree`, else 0.
///
/// # Safety
/// `epoly` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn emzv_membership(epoly: *const c_char, lie_degree: usize, out: *mut i32) -> EmzvStatus {
    guard(|| {
        check_out(out)?;
        let x = EPoly::parse(arg_str(epoly, "epoly")?)?;
        let m = uu_dual_membership(&x, lie_degree)?;
        *out = m.values().all(|b| *b) as i32;
        Ok(())
    })
}

/// Sets `*out` to 1 if the q-expansion of `epoly` to `order` terms has no
/// powers of T, else 0.
///
/// # Safety
/// `epoly` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn emzv_fourier_check(epoly: *const c_char, order: usize, out: *mut i32) -> EmzvStatus {
    guard(|| {
        check_out(out)?;
        let x = EPoly::parse(arg_str(epoly, "epoly")?)?;
        *out = fourier_membership(&x, order) as i32;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn emzv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. Valid
/// until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn emzv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, e.g. "TableOverflow".
#[no_mangle]
pub extern "C" fn emzv_status_name(status: EmzvStatus) -> *const c_char {
    let s: &'static CStr = match status {
        EmzvStatus::Ok => c"Ok",
        EmzvStatus::NullArgument => c"NullArgument",
        EmzvStatus::InvalidUtf8 => c"InvalidUtf8",
        EmzvStatus::ParseError => c"ParseError",
        EmzvStatus::ConsistencyError => c"ConsistencyError",
        EmzvStatus::TableOverflow => c"TableOverflow",
        EmzvStatus::DimensionMismatch => c"DimensionMismatch",
        EmzvStatus::DegreeMismatch => c"DegreeMismatch",
        EmzvStatus::PreconditionViolated => c"PreconditionViolated",
        EmzvStatus::ExtractionInconsistent => c"ExtractionInconsistent",
        EmzvStatus::FourierViolation => c"FourierViolation",
        EmzvStatus::TruncationOverflow => c"TruncationOverflow",
        EmzvStatus::Panic => c"Panic",
    };
    s.as_ptr()
}
