//! C ABI for the fillsys engine: opaque handles, status codes, and
//! caller-freed strings. The header is generated into `include/fillsys.h`
//! by the build script.
//!
//! Conventions: functions return [`FsStatus`]; results come back through
//! out-pointers. Any non-`Ok` status leaves a message retrievable with
//! `fs_last_error_message` (thread-local). Strings returned by this
//! library are freed with `fs_string_free`, handles with their `_free`
//! function. Passing a null required pointer yields `NullArgument`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fillsys::chain::assemble_matrix;
use fillsys::enumerate::{enumerate_basis, Basis, Budget};
use fillsys::figures::{build_x, build_y, build_z, verify_paper, VerifyOptions};
use fillsys::filling::{boundary_profile, is_disconnected, is_filling_system};
use fillsys::render::render_svg;
use fillsys::{ChordWord, Error};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Malformed = 3,
    BudgetExceeded = 4,
    CheckFailed = 5,
    Internal = 6,
}

/// Opaque chord word handle.
pub struct FsWord(ChordWord);

/// Opaque basis handle.
pub struct FsBasis(Basis);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> FsStatus {
    match e {
        Error::BudgetExceeded(_) => FsStatus::BudgetExceeded,
        Error::MalformedDiagram(_)
        | Error::MalformedPermutation(_)
        | Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::ChordOutOfRange { .. } => FsStatus::Malformed,
        _ => FsStatus::Internal,
    }
}

fn fail(e: &Error) -> FsStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Runs a closure, converting panics into `Internal`.
fn guarded(f: impl FnOnce() -> FsStatus) -> FsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            FsStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, FsStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(FsStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        FsStatus::InvalidUtf8
    })
}

fn own_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Message of the most recent error on this thread (caller frees).
#[no_mangle]
pub extern "C" fn fs_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| own_string(slot.borrow().to_string_lossy().into_owned()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a fillsys function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a chord word from its text form, e.g. `"1 2 1 2"`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_word_parse(text: *const c_char, out: *mut *mut FsWord) -> FsStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FsStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| match ChordWord::parse(text) {
        Ok(word) => {
            *out = Box::into_raw(Box::new(FsWord(word)));
            FsStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// # Safety
/// `word` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fs_word_free(word: *mut FsWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Text form of a word (caller frees).
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_word_to_string(word: *const FsWord) -> *mut c_char {
    if word.is_null() {
        return std::ptr::null_mut();
    }
    own_string((*word).0.to_string())
}

/// Number of chords.
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_word_chord_count(word: *const FsWord) -> u32 {
    if word.is_null() {
        return 0;
    }
    (*word).0.n() as u32
}

/// Canonical representative, sign, and torsion flag of a word's class.
///
/// # Safety
/// `word` must be live; out-pointers, when non-null, must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_word_canonical(
    word: *const FsWord,
    out_word: *mut *mut FsWord,
    out_sign: *mut i32,
    out_torsion: *mut bool,
) -> FsStatus {
    if word.is_null() || out_word.is_null() {
        set_error("null argument");
        return FsStatus::NullArgument;
    }
    guarded(|| {
        let (class, sign) = (*word).0.canonicalize();
        if !out_sign.is_null() {
            *out_sign = sign as i32;
        }
        if !out_torsion.is_null() {
            *out_torsion = class.torsion();
        }
        *out_word = Box::into_raw(Box::new(FsWord(class.into_word())));
        FsStatus::Ok
    })
}

/// Boundary-cycle count, genus, and least cycle length of a word.
///
/// # Safety
/// `word` must be live; out-pointers, when non-null, must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_word_boundary(
    word: *const FsWord,
    out_cycles: *mut u32,
    out_genus: *mut u32,
    out_min_cycle: *mut u32,
) -> FsStatus {
    if word.is_null() {
        set_error("null word");
        return FsStatus::NullArgument;
    }
    guarded(|| {
        let p = boundary_profile(&(*word).0);
        if !out_cycles.is_null() {
            *out_cycles = p.b() as u32;
        }
        if !out_genus.is_null() {
            *out_genus = p.genus().unwrap_or(0) as u32;
        }
        if !out_min_cycle.is_null() {
            *out_min_cycle = p.min_orbit_length() as u32;
        }
        FsStatus::Ok
    })
}

/// True iff the word is a k-filling system of genus g.
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_word_is_filling_system(
    word: *const FsWord,
    genus: u32,
    k: u32,
) -> bool {
    if word.is_null() {
        return false;
    }
    is_filling_system(&(*word).0, genus as usize, k as usize)
}

/// True iff the crossing graph is disconnected.
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_word_is_disconnected(word: *const FsWord) -> bool {
    if word.is_null() {
        return false;
    }
    is_disconnected(&(*word).0)
}

/// Deterministic SVG rendering of the word (caller frees).
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_word_render_svg(word: *const FsWord) -> *mut c_char {
    if word.is_null() {
        return std::ptr::null_mut();
    }
    own_string(render_svg(&(*word).0))
}

unsafe fn build_figure(which: u8, genus: u32, out: *mut *mut FsWord) -> FsStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FsStatus::NullArgument;
    }
    guarded(|| {
        let built = match which {
            0 => build_x(genus as usize),
            1 => build_y(genus as usize),
            _ => build_z(genus as usize),
        };
        match built {
            Ok(fs) => {
                *out = Box::into_raw(Box::new(FsWord(fs.word().clone())));
                FsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// The 0-filling system X(g), g >= 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_build_x(genus: u32, out: *mut *mut FsWord) -> FsStatus {
    build_figure(0, genus, out)
}

/// The 1-filling system Y(g), g >= 2.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_build_y(genus: u32, out: *mut *mut FsWord) -> FsStatus {
    build_figure(1, genus, out)
}

/// The 1-filling system Z(g), g >= 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_build_z(genus: u32, out: *mut *mut FsWord) -> FsStatus {
    build_figure(2, genus, out)
}

/// Enumerates the basis of U_k at a genus. With `override_budget` the
/// 20-point enumeration guard is lifted.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_enumerate_basis(
    genus: u32,
    k: u32,
    override_budget: bool,
    out: *mut *mut FsBasis,
) -> FsStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FsStatus::NullArgument;
    }
    let budget = if override_budget {
        Budget::unlimited()
    } else {
        Budget::default()
    };
    guarded(|| match enumerate_basis(genus as usize, k as usize, budget) {
        Ok(basis) => {
            *out = Box::into_raw(Box::new(FsBasis(basis)));
            FsStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// # Safety
/// `basis` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fs_basis_free(basis: *mut FsBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Number of classes in the basis.
///
/// # Safety
/// `basis` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_basis_len(basis: *const FsBasis) -> u64 {
    if basis.is_null() {
        return 0;
    }
    (*basis).0.len() as u64
}

/// Class `index` of the basis as a fresh word handle; sets the torsion
/// flag when requested.
///
/// # Safety
/// `basis` must be live; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_basis_class(
    basis: *const FsBasis,
    index: u64,
    out_word: *mut *mut FsWord,
    out_torsion: *mut bool,
) -> FsStatus {
    if basis.is_null() || out_word.is_null() {
        set_error("null argument");
        return FsStatus::NullArgument;
    }
    let b = &(*basis).0;
    if index >= b.len() as u64 {
        set_error("basis index out of range");
        return FsStatus::Malformed;
    }
    let class = b.class(index as usize);
    if !out_torsion.is_null() {
        *out_torsion = class.torsion();
    }
    *out_word = Box::into_raw(Box::new(FsWord(class.word().clone())));
    FsStatus::Ok
}

/// Writes the basis cache file (text form) to `path`.
///
/// # Safety
/// `basis` must be live; `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fs_basis_write(basis: *const FsBasis, path: *const c_char) -> FsStatus {
    if basis.is_null() {
        set_error("null basis");
        return FsStatus::NullArgument;
    }
    let path = match read_str(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| match (*basis).0.write_cache(std::path::Path::new(path)) {
        Ok(()) => FsStatus::Ok,
        Err(e) => fail(&e),
    })
}

/// Cokernel of U_1 -> U_0 at a genus, as a text descriptor such as `0` or
/// `Z + Z/2` (caller frees via `out_group`).
///
/// # Safety
/// `out_group` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_coinvariants(
    genus: u32,
    override_budget: bool,
    out_group: *mut *mut c_char,
) -> FsStatus {
    if out_group.is_null() {
        set_error("null out pointer");
        return FsStatus::NullArgument;
    }
    let budget = if override_budget {
        Budget::unlimited()
    } else {
        Budget::default()
    };
    guarded(|| match assemble_matrix(genus as usize, 1, budget) {
        Ok(matrix) => {
            *out_group = own_string(matrix.cokernel().to_string());
            FsStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Runs the verification pipeline at a genus; the machine-format report
/// (one `CHECK` line per check) lands in `out_report` (caller frees).
/// Returns `CheckFailed` when a check fails.
///
/// # Safety
/// `out_report`, when non-null, must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_verify_paper(
    genus: u32,
    stretch: bool,
    override_budget: bool,
    out_report: *mut *mut c_char,
) -> FsStatus {
    let options = VerifyOptions {
        stretch,
        budget: Some(if override_budget {
            Budget::unlimited()
        } else {
            Budget::default()
        }),
        cache_dir: None,
    };
    guarded(|| match verify_paper(genus as usize, &options) {
        Ok(report) => {
            if !out_report.is_null() {
                *out_report = own_string(report.machine_lines());
            }
            if report.passed() {
                FsStatus::Ok
            } else {
                set_error("one or more checks failed");
                FsStatus::CheckFailed
            }
        }
        Err(e) => fail(&e),
    })
}
