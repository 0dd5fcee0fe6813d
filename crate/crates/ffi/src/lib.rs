//! C ABI over `ordgram`.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `*_parse`/`*_new` style function and released by the matching `*_free`.
//! Fallible calls return an [`OgStatus`] and write results through out
//! pointers; on failure [`og_last_error`] describes the problem. Strings
//! returned by the library are owned by the caller and released with
//! [`og_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ordgram::grammar::{check_prefix, check_wellorder_probes, height_bound, normalize, parse_grammar};
use ordgram::lexorder::enumerate_words;
use ordgram::translate::{build_frontier_grammar, build_labeled_grammar, verify_translation};
use ordgram::{synthesis, CnfOrdinal, Grammar, SynthesizedGrammar, TreeSystem};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Panic = 5,
}

pub struct OgOrdinal(CnfOrdinal);
pub struct OgGrammar(Grammar);
pub struct OgSynth(SynthesizedGrammar);
pub struct OgSystem(TreeSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn og_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn og_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn guard(f: impl FnOnce() -> Result<(), (OgStatus, String)>) -> OgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OgStatus::Panic
        }
    }
}

type Failure = (OgStatus, String);

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((OgStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (OgStatus::InvalidUtf8, e.to_string()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or((OgStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err((OgStatus::NullPointer, "null out pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn parse_err(e: impl ToString) -> Failure {
    (OgStatus::Parse, e.to_string())
}

fn arg_err(e: impl ToString) -> Failure {
    (OgStatus::InvalidArgument, e.to_string())
}

// Ordinals

/// Parses an ordinal expression such as `"w^(w^2)*3 + w + 1"`.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_ordinal_parse(text_ptr: *const c_char, out: *mut *mut OgOrdinal) -> OgStatus {
    guard(|| {
        let a: CnfOrdinal = text(text_ptr)?.parse().map_err(parse_err)?;
        put(out, boxed(OgOrdinal(a)))
    })
}

/// # Safety
/// `a` and `b` must be live ordinal handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_ordinal_add(a: *const OgOrdinal, b: *const OgOrdinal, out: *mut *mut OgOrdinal) -> OgStatus {
    guard(|| put(out, boxed(OgOrdinal(get(a)?.0.add(&get(b)?.0)))))
}

/// # Safety
/// `a` and `b` must be live ordinal handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_ordinal_mul(a: *const OgOrdinal, b: *const OgOrdinal, out: *mut *mut OgOrdinal) -> OgStatus {
    guard(|| put(out, boxed(OgOrdinal(get(a)?.0.mul(&get(b)?.0)))))
}

/// Writes -1, 0 or 1 to `out`.
///
/// # Safety
/// `a` and `b` must be live ordinal handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_ordinal_compare(a: *const OgOrdinal, b: *const OgOrdinal, out: *mut i32) -> OgStatus {
    guard(|| put(out, get(a)?.0.cmp(&get(b)?.0) as i32))
}

/// Canonical text of an ordinal, or null for a null handle.
///
/// # Safety
/// `a` must be null or a live ordinal handle.
#[no_mangle]
pub unsafe extern "C" fn og_ordinal_to_string(a: *const OgOrdinal) -> *mut c_char {
    a.as_ref().map_or(ptr::null_mut(), |a| c_string(a.0.to_string()))
}

/// # Safety
/// `a` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn og_ordinal_free(a: *mut OgOrdinal) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

// Grammars

/// Parses a grammar file and normalizes it.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_grammar_parse(text_ptr: *const c_char, out: *mut *mut OgGrammar) -> OgStatus {
    guard(|| {
        let g = parse_grammar(text(text_ptr)?).map_err(parse_err)?;
        put(out, boxed(OgGrammar(normalize(&g))))
    })
}

/// # Safety
/// `g` must be null or a live grammar handle.
#[no_mangle]
pub unsafe extern "C" fn og_grammar_to_string(g: *const OgGrammar) -> *mut c_char {
    g.as_ref().map_or(ptr::null_mut(), |g| c_string(g.0.to_string()))
}

/// `ω^(ω^h)` for the height `h` of nonterminal `name`.
///
/// # Safety
/// `g` must be a live grammar handle, `name` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_grammar_height_bound(
    g: *const OgGrammar,
    name: *const c_char,
    out: *mut *mut OgOrdinal,
) -> OgStatus {
    guard(|| {
        let b = height_bound(&get(g)?.0, text(name)?).map_err(arg_err)?;
        put(out, boxed(OgOrdinal(b)))
    })
}

/// Runs the bounded prefix and well-order probes; `clean` receives 1 when
/// both found nothing.
///
/// # Safety
/// `g` must be a live grammar handle and `clean` writable.
#[no_mangle]
pub unsafe extern "C" fn og_grammar_check(g: *const OgGrammar, maxlen: usize, clean: *mut i32) -> OgStatus {
    guard(|| {
        let g = &get(g)?.0;
        let ok = check_prefix(g, maxlen).is_clean() && check_wellorder_probes(g, maxlen).is_clean();
        put(clean, ok as i32)
    })
}

/// Words of length at most `maxlen` in lexicographic order, one per line.
///
/// # Safety
/// `g` must be a live grammar handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_grammar_enumerate(
    g: *const OgGrammar,
    maxlen: usize,
    cap: usize,
    out: *mut *mut c_char,
) -> OgStatus {
    guard(|| {
        let g = &get(g)?.0;
        let en = enumerate_words(g, maxlen, cap);
        let lines: String = en.words.iter().map(|w| g.alphabet().render(w) + "\n").collect();
        put(out, c_string(lines))
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn og_grammar_free(g: *mut OgGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

// Synthesized grammars

/// # Safety
/// `a` must be a live ordinal handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_synth_new(a: *const OgOrdinal, out: *mut *mut OgSynth) -> OgStatus {
    guard(|| {
        let sg = synthesis::from_cnf(&get(a)?.0).map_err(arg_err)?;
        put(out, boxed(OgSynth(sg)))
    })
}

/// The grammar file with its recipe header.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn og_synth_to_string(s: *const OgSynth) -> *mut c_char {
    s.as_ref().map_or(ptr::null_mut(), |s| c_string(s.0.to_file_string()))
}

/// # Safety
/// `s` must be a live handle, `word` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_synth_rank(s: *const OgSynth, word: *const c_char, out: *mut *mut OgOrdinal) -> OgStatus {
    guard(|| {
        let s = &get(s)?.0;
        let w = s.grammar().alphabet().parse_word(text(word)?).map_err(parse_err)?;
        put(out, boxed(OgOrdinal(s.rank(&w).map_err(arg_err)?)))
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn og_synth_free(s: *mut OgSynth) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// Equation systems

/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_system_parse(text_ptr: *const c_char, out: *mut *mut OgSystem) -> OgStatus {
    guard(|| {
        let sys: TreeSystem = text(text_ptr)?.parse().map_err(parse_err)?;
        put(out, boxed(OgSystem(sys)))
    })
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_system_binarize(s: *const OgSystem, out: *mut *mut OgSystem) -> OgStatus {
    guard(|| put(out, boxed(OgSystem(get(s)?.0.binarize()))))
}

/// The frontier grammar, or the labeled-frontier grammar when `labeled` is
/// nonzero. Neither is reduced.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn og_system_translate(s: *const OgSystem, labeled: i32, out: *mut *mut OgGrammar) -> OgStatus {
    guard(|| {
        let sys = &get(s)?.0;
        let g = if labeled != 0 { build_labeled_grammar(sys) } else { build_frontier_grammar(sys) };
        put(out, boxed(OgGrammar(g.map_err(arg_err)?)))
    })
}

/// Bounded comparison of the labeled-frontier grammar with Kleene iterates;
/// `passed` receives 1 when no discrepancy was found.
///
/// # Safety
/// `s` must be a live handle and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn og_system_verify(s: *const OgSystem, depth: usize, maxlen: usize, passed: *mut i32) -> OgStatus {
    guard(|| {
        let r = verify_translation(&get(s)?.0, depth, maxlen).map_err(arg_err)?;
        put(passed, r.passed() as i32)
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn og_system_free(s: *mut OgSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
