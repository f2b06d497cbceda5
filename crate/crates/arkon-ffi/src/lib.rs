//! C ABI over the defeasible logic toolkit.
//!
//! Theories travel across the boundary as opaque [`ArkonTheory`] handles
//! created by [`arkon_theory_parse`] or [`arkon_theory_generate`] and
//! released by [`arkon_theory_free`]. Every fallible call returns an
//! [`ArkonStatus`]; results are written through out-pointers. Strings
//! handed to the caller are NUL-terminated UTF-8 owned by this library and
//! must be released with [`arkon_string_free`].
//!
//! The companion header `include/arkon.h` is regenerated on every build.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use arkon::generate::{generate, Family, FamilySpec};
use arkon::parser::{parse_theory, print_theory};
use arkon::reasoner::{conclusions, query, Verdict};
use arkon::theory::{Literal, Theory};
use arkon::translate::{render_theory, RenderConfig};

/// Outcome of an API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArkonStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The theory text did not parse.
    ParseFailed = 3,
    /// The family name or its parameters were rejected.
    InvalidSpec = 4,
    /// The query literal was not a well-formed literal.
    InvalidLiteral = 5,
    /// A panic or other internal failure was caught at the boundary.
    InternalError = 6,
}

/// Answer for a queried literal.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArkonVerdict {
    /// Neither the literal nor its complement is defeasibly provable.
    Undetermined = 0,
    /// The literal is defeasibly provable.
    ProvablyTrue = 1,
    /// The complement of the literal is defeasibly provable.
    ProvablyFalse = 2,
}

/// Opaque handle to an immutable theory.
pub struct ArkonTheory(Theory);

fn guard(body: impl FnOnce() -> ArkonStatus) -> ArkonStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(ArkonStatus::InternalError)
}

/// Reads a borrowed C string, rejecting NULL and invalid UTF-8.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ArkonStatus> {
    if ptr.is_null() {
        return Err(ArkonStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| ArkonStatus::InvalidUtf8)
}

unsafe fn write_string(text: String, out: *mut *mut c_char) -> ArkonStatus {
    match CString::new(text) {
        Ok(owned) => {
            *out = owned.into_raw();
            ArkonStatus::Ok
        }
        Err(_) => ArkonStatus::InternalError,
    }
}

/// Parses theory text into a new handle.
///
/// On success writes the handle through `out`; the caller owns it and must
/// release it with [`arkon_theory_free`].
///
/// # Safety
///
/// `text` must be NULL or a valid NUL-terminated string; `out` must be NULL
/// or a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_parse(
    text: *const c_char,
    out: *mut *mut ArkonTheory,
) -> ArkonStatus {
    guard(|| {
        if out.is_null() {
            return ArkonStatus::NullArgument;
        }
        let text = match read_str(text) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match parse_theory(text) {
            Ok(theory) => {
                *out = Box::into_raw(Box::new(ArkonTheory(theory)));
                ArkonStatus::Ok
            }
            Err(_) => ArkonStatus::ParseFailed,
        }
    })
}

/// Generates a benchmark family instance into a new handle.
///
/// `family` is one of the family names accepted by the command line
/// (`chain`, `chains`, `circle`, `circles`, `dag`, `levels-`, `levels`,
/// `hierarchies`); `k` is the branching factor for the families that take
/// one and must be 0 for the others.
///
/// # Safety
///
/// `family` must be NULL or a valid NUL-terminated string; `out` must be
/// NULL or a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_generate(
    family: *const c_char,
    n: u32,
    k: u32,
    out: *mut *mut ArkonTheory,
) -> ArkonStatus {
    guard(|| {
        if out.is_null() {
            return ArkonStatus::NullArgument;
        }
        let family = match read_str(family) {
            Ok(name) => name,
            Err(status) => return status,
        };
        let family: Family = match family.parse() {
            Ok(family) => family,
            Err(_) => return ArkonStatus::InvalidSpec,
        };
        let spec = if k == 0 {
            FamilySpec::new(family, n)
        } else {
            FamilySpec::with_branching(family, n, k)
        };
        match generate(&spec) {
            Ok(theory) => {
                *out = Box::into_raw(Box::new(ArkonTheory(theory)));
                ArkonStatus::Ok
            }
            Err(_) => ArkonStatus::InvalidSpec,
        }
    })
}

/// Releases a handle returned by parse or generate. NULL is ignored.
///
/// # Safety
///
/// `theory` must be NULL or a handle previously returned by this library
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_free(theory: *mut ArkonTheory) {
    if !theory.is_null() {
        drop(Box::from_raw(theory));
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
///
/// `text` must be NULL or a string previously returned by this library
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn arkon_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Writes the canonical text form of the theory through `out`.
///
/// # Safety
///
/// `theory` must be NULL or a live handle; `out` must be NULL or a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_print(
    theory: *const ArkonTheory,
    out: *mut *mut c_char,
) -> ArkonStatus {
    guard(|| {
        if theory.is_null() || out.is_null() {
            return ArkonStatus::NullArgument;
        }
        write_string(print_theory(&(*theory).0), out)
    })
}

/// Writes the natural-language rendering of the theory through `out`, one
/// sentence per line. NULL `noun` or `article` pick the defaults.
///
/// # Safety
///
/// `theory` must be NULL or a live handle; `noun` and `article` must each
/// be NULL or valid NUL-terminated strings; `out` must be NULL or a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_translate(
    theory: *const ArkonTheory,
    noun: *const c_char,
    article: *const c_char,
    out: *mut *mut c_char,
) -> ArkonStatus {
    guard(|| {
        if theory.is_null() || out.is_null() {
            return ArkonStatus::NullArgument;
        }
        let mut config = RenderConfig::default();
        if !noun.is_null() {
            match read_str(noun) {
                Ok(noun) => config.noun = noun.to_owned(),
                Err(status) => return status,
            }
        }
        if !article.is_null() {
            match read_str(article) {
                Ok(article) => config.article = article.to_owned(),
                Err(status) => return status,
            }
        }
        let rendering = render_theory(&(*theory).0, &config);
        let mut text = rendering.sentences.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        write_string(text, out)
    })
}

/// Queries one literal (prefix `-` for the negation) and writes the
/// verdict through `out`.
///
/// # Safety
///
/// `theory` must be NULL or a live handle; `literal` must be NULL or a
/// valid NUL-terminated string; `out` must be NULL or a valid pointer to
/// writable memory.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_query(
    theory: *const ArkonTheory,
    literal: *const c_char,
    out: *mut ArkonVerdict,
) -> ArkonStatus {
    guard(|| {
        if theory.is_null() || out.is_null() {
            return ArkonStatus::NullArgument;
        }
        let literal = match read_str(literal) {
            Ok(text) => text,
            Err(status) => return status,
        };
        let literal: Literal = match literal.parse() {
            Ok(literal) => literal,
            Err(_) => return ArkonStatus::InvalidLiteral,
        };
        *out = match query(&(*theory).0, &literal) {
            Verdict::Undetermined => ArkonVerdict::Undetermined,
            Verdict::ProvablyTrue => ArkonVerdict::ProvablyTrue,
            Verdict::ProvablyFalse => ArkonVerdict::ProvablyFalse,
        };
        ArkonStatus::Ok
    })
}

/// Writes every tagged conclusion of the theory through `out` as a JSON
/// document.
///
/// # Safety
///
/// `theory` must be NULL or a live handle; `out` must be NULL or a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn arkon_theory_conclusions_json(
    theory: *const ArkonTheory,
    out: *mut *mut c_char,
) -> ArkonStatus {
    guard(|| {
        if theory.is_null() || out.is_null() {
            return ArkonStatus::NullArgument;
        }
        let value = conclusions(&(*theory).0).to_json();
        match serde_json::to_string(&value) {
            Ok(text) => write_string(text, out),
            Err(_) => ArkonStatus::InternalError,
        }
    })
}

/// Returns the library version as a static NUL-terminated string. The
/// caller must not free it.
#[no_mangle]
pub extern "C" fn arkon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
