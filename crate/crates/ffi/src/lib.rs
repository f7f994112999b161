//! C ABI for kframe.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `_free` function. Strings returned through out-parameters are allocated
//! here and released with [`kf_string_free`]. Every call returns a
//! [`KfStatus`]; on failure [`kf_last_error`] describes the most recent error
//! on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kframe::cli::{self, ast::Document, CliError};
use kframe::field::{Field, FiniteField};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SemanticError = 4,
    /// The request ran but a guaranteed identity failed; the report is still
    /// returned.
    VerificationFailed = 5,
    /// Element out of range, or an operation undefined on the input.
    InvalidArgument = 6,
    Internal = 7,
}

/// A parsed input document.
pub struct KfDocument(Document);

/// A finite field.
pub struct KfField(FiniteField);

struct LastError {
    message: CString,
    line: usize,
    col: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>, line: usize, col: usize) {
    let message = CString::new(message.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { message, line, col }));
}

fn fail(status: KfStatus, message: impl Into<String>) -> KfStatus {
    set_error(message, 0, 0);
    status
}

fn cli_failure(err: CliError) -> KfStatus {
    match &err {
        CliError::Parse(p) => {
            set_error(p.message.clone(), p.line, p.col);
            KfStatus::ParseError
        }
        CliError::Semantic(m) => fail(KfStatus::SemanticError, m.clone()),
    }
}

fn guarded(f: impl FnOnce() -> KfStatus) -> KfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(KfStatus::Internal, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, KfStatus> {
    if s.is_null() {
        return Err(fail(KfStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(KfStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> KfStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            KfStatus::Ok
        }
        Err(_) => fail(KfStatus::Internal, "output contains a nul byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(KfStatus::NullPointer, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn kf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn kf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Line and column of the last parse error (both 0 for other errors).
///
/// # Safety
/// `line` and `col` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_last_error_position(line: *mut usize, col: *mut usize) {
    let (l, c) = LAST_ERROR.with(|e| e.borrow().as_ref().map_or((0, 0), |e| (e.line, e.col)));
    if !line.is_null() {
        *line = l;
    }
    if !col.is_null() {
        *col = c;
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a document.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_document_parse(text: *const c_char, out: *mut *mut KfDocument) -> KfStatus {
    guarded(|| {
        non_null!(out);
        let text = try_status!(read_str(text));
        match cli::parse(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(KfDocument(doc)));
                KfStatus::Ok
            }
            Err(e) => cli_failure(e.into()),
        }
    })
}

/// # Safety
/// `doc` must be null or a handle from [`kf_document_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_document_free(doc: *mut KfDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Canonical text of a document.
///
/// # Safety
/// `doc` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_document_render(doc: *const KfDocument, out: *mut *mut c_char) -> KfStatus {
    guarded(|| {
        non_null!(doc, out);
        write_string(out, (*doc).0.to_string())
    })
}

/// Runs the document's request and writes the report (key=value lines, or
/// one JSON object when `json` is true). A failed verification still writes
/// the report and returns `VerificationFailed`.
///
/// # Safety
/// `doc` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_document_run(doc: *const KfDocument, json: bool, out: *mut *mut c_char) -> KfStatus {
    guarded(|| {
        non_null!(doc, out);
        let report = match cli::execute(&(*doc).0, None) {
            Ok(r) => r,
            Err(e) => return cli_failure(e),
        };
        let text = if json { report.render_json() } else { report.render_text() };
        match write_string(out, text) {
            KfStatus::Ok if !report.verified() => fail(KfStatus::VerificationFailed, "verification failed"),
            s => s,
        }
    })
}

/// Opens a finite field from a descriptor such as `F7` or `F9 mod y^2+1`.
///
/// # Safety
/// `desc` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_open(desc: *const c_char, out: *mut *mut KfField) -> KfStatus {
    guarded(|| {
        non_null!(out);
        let desc = try_status!(read_str(desc));
        match cli::finite_field(desc) {
            Ok(k) => {
                *out = Box::into_raw(Box::new(KfField(k)));
                KfStatus::Ok
            }
            Err(e) => cli_failure(e),
        }
    })
}

/// # Safety
/// `field` must be null or a handle from [`kf_field_open`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_field_free(field: *mut KfField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of elements; 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_field_order(field: *const KfField) -> u64 {
    field.as_ref().map_or(0, |k| k.0.order())
}

fn check_elem(k: &FiniteField, a: u64) -> Result<(), KfStatus> {
    if a < k.order() {
        Ok(())
    } else {
        Err(fail(KfStatus::InvalidArgument, format!("element {a} is out of range for {}", k.name())))
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// `a op b` on element indices, `op` one of the [`KfOp`] values.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_arith(field: *const KfField, op: u32, a: u64, b: u64, out: *mut u64) -> KfStatus {
    guarded(|| {
        non_null!(field, out);
        let k = &(*field).0;
        try_status!(check_elem(k, a));
        try_status!(check_elem(k, b));
        *out = match op {
            x if x == KfOp::Add as u32 => k.add(&a, &b),
            x if x == KfOp::Sub as u32 => k.sub(&a, &b),
            x if x == KfOp::Mul as u32 => k.mul(&a, &b),
            x if x == KfOp::Div as u32 => match k.div(&a, &b) {
                Some(v) => v,
                None => return fail(KfStatus::InvalidArgument, "division by zero"),
            },
            _ => return fail(KfStatus::InvalidArgument, format!("unknown operation {op}")),
        };
        KfStatus::Ok
    })
}

/// `a^e`; negative exponents need a nonzero `a`.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_pow(field: *const KfField, a: u64, e: i64, out: *mut u64) -> KfStatus {
    guarded(|| {
        non_null!(field, out);
        let k = &(*field).0;
        try_status!(check_elem(k, a));
        match k.pow_signed(&a, e) {
            Some(v) => {
                *out = v;
                KfStatus::Ok
            }
            None => fail(KfStatus::InvalidArgument, "zero has no inverse"),
        }
    })
}

/// The fixed generator of the multiplicative group.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_generator(field: *const KfField, out: *mut u64) -> KfStatus {
    guarded(|| {
        non_null!(field, out);
        match (*field).0.generator() {
            Ok(g) => {
                *out = g;
                KfStatus::Ok
            }
            Err(e) => fail(KfStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Discrete log of `a` to the base [`kf_field_generator`].
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_log(field: *const KfField, a: u64, out: *mut u64) -> KfStatus {
    guarded(|| {
        non_null!(field, out);
        let k = &(*field).0;
        try_status!(check_elem(k, a));
        match k.log(a) {
            Ok(e) => {
                *out = e;
                KfStatus::Ok
            }
            Err(e) => fail(KfStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Human-readable form of an element, e.g. `y+1`.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_format(field: *const KfField, a: u64, out: *mut *mut c_char) -> KfStatus {
    guarded(|| {
        non_null!(field, out);
        let k = &(*field).0;
        try_status!(check_elem(k, a));
        write_string(out, k.format_elem(&a))
    })
}
