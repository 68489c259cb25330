//! C ABI over `fsm-core`.
//!
//! Values are opaque `FsmValue` handles made by [`fsm_value_parse`] and
//! released with [`fsm_value_free`]. Every fallible call returns an
//! [`FsmStatus`]; on failure [`fsm_last_error_message`] describes what went
//! wrong on the calling thread. Strings handed out by the library are
//! NUL-terminated UTF-8 and must be released with [`fsm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fsm_core::deciders::cfg_is_empty;
use fsm_core::definition::{
    as_machine, convert, parse_definition, render_definition, Definition, Target,
};
use fsm_core::grammar::DerivOutcome;
use fsm_core::machine::Limits;
use fsm_core::symbol::{Symbol, Word};
use fsm_core::testers::{test_equiv_sm, EquivReport, Sample};
use fsm_core::Error;

/// A parsed machine, grammar, regular expression or combined tm.
pub struct FsmValue(Definition);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FsmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    /// A constructor rejected the definition.
    Invalid = 4,
    /// The operation does not apply to this kind of value.
    Unsupported = 5,
    /// The run failed, e.g. a word outside the alphabet or a tm leaving the tape.
    Runtime = 6,
    StepLimit = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FsmDerivability {
    Derivable = 0,
    NotDerivable = 1,
    Undecided = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FsmStatus {
    match e.root() {
        Error::Syntax { .. } => FsmStatus::Syntax,
        Error::StepLimitExceeded(_) => FsmStatus::StepLimit,
        Error::KindMismatch(..)
        | Error::TmClosureUnsupported
        | Error::NotClosedForPda
        | Error::CsgConversionUnsupported
        | Error::TmConversionUnsupported
        | Error::UnsupportedKind(_)
        | Error::AlphabetMismatch(_) => FsmStatus::Unsupported,
        Error::WordNotOverAlphabet(_)
        | Error::FellOffTape
        | Error::HeadOutOfRange { .. }
        | Error::MachineWedged(_)
        | Error::NoBranchForSymbol(_)
        | Error::UnboundVariable(_) => FsmStatus::Runtime,
        _ => FsmStatus::Invalid,
    }
}

struct Failure(FsmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording its error or panic for [`fsm_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FsmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FsmStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FsmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FsmStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FsmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn value<'a>(p: *const FsmValue, what: &str) -> Result<&'a Definition, Failure> {
    p.as_ref().map(|v| &v.0).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Parses a definition. On success `*out` owns a new handle.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fsm_value_parse(
    source: *const c_char,
    out: *mut *mut FsmValue,
) -> FsmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let d = parse_definition(text(source, "source")?)?;
        out.write(Box::into_raw(Box::new(FsmValue(d))));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `v` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fsm_value_free(v: *mut FsmValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fsm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The definition's tag ("dfa", "cfg", "regexp", ...), or null for a null
/// handle. The string is static.
///
/// # Safety
/// `v` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsm_value_kind(v: *const FsmValue) -> *const c_char {
    let Some(v) = v.as_ref() else {
        return ptr::null();
    };
    let tag: &'static CStr = match v.0.tag() {
        "dfa" => c"dfa",
        "ndfa" => c"ndfa",
        "pda" => c"pda",
        "tm" => c"tm",
        "ctm" => c"ctm",
        "rg" => c"rg",
        "cfg" => c"cfg",
        "csg" => c"csg",
        _ => c"regexp",
    };
    tag.as_ptr()
}

/// Writes the canonical text of a value to `*out`.
///
/// # Safety
/// `v` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_value_render(v: *const FsmValue, out: *mut *mut c_char) -> FsmStatus {
    guard(|| {
        let d = value(v, "value")?;
        put(out, owned_string(render_definition(d)), "out")
    })
}

/// Runs a machine (or the machine of a regexp or grammar) on a word of
/// whitespace-separated tokens. `step_limit` bounds tm runs; 0 keeps the
/// default.
///
/// # Safety
/// `v` must be a live handle, `word` a NUL-terminated string and
/// `accepted` writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_apply(
    v: *const FsmValue,
    word: *const c_char,
    head: usize,
    step_limit: usize,
    accepted: *mut bool,
) -> FsmStatus {
    guard(|| {
        let m = as_machine(value(v, "value")?.clone())?;
        let w = Word::parse(text(word, "word")?);
        let verdict = m.apply_with(&w, head, &limits(step_limit))?;
        put(accepted, verdict.is_accept(), "accepted")
    })
}

fn limits(step_limit: usize) -> Limits {
    if step_limit == 0 {
        Limits::default()
    } else {
        Limits {
            tm_steps: step_limit,
            ctm_dispatches: step_limit,
            ..Limits::default()
        }
    }
}

/// Searches for a derivation of `word` in a grammar. When the word is
/// derivable and `derivation` is not null, `*derivation` receives the
/// sentential forms joined by " ⇒ "; otherwise it is set to null.
///
/// # Safety
/// `g` must be a live handle, `word` a NUL-terminated string, `result`
/// writable and `derivation` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_derive(
    g: *const FsmValue,
    word: *const c_char,
    result: *mut FsmDerivability,
    derivation: *mut *mut c_char,
) -> FsmStatus {
    guard(|| {
        if !derivation.is_null() {
            derivation.write(ptr::null_mut());
        }
        let Definition::Grammar(g) = value(g, "grammar")? else {
            return Err(Failure(FsmStatus::Unsupported, "expected a grammar".into()));
        };
        let outcome = g.derive(&Word::parse(text(word, "word")?))?;
        let r = match outcome {
            DerivOutcome::Derived(d) => {
                if !derivation.is_null() {
                    derivation.write(owned_string(d.to_string()));
                }
                FsmDerivability::Derivable
            }
            DerivOutcome::NotInLanguage => FsmDerivability::NotDerivable,
            DerivOutcome::Undecided => FsmDerivability::Undecided,
        };
        put(result, r, "result")
    })
}

/// Transforms a value. `target` is one of dfa, ndfa, regexp, grammar,
/// reverse, pda or sm. On success `*out` owns a new handle.
///
/// # Safety
/// `v` must be a live handle, `target` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_convert(
    v: *const FsmValue,
    target: *const c_char,
    out: *mut *mut FsmValue,
) -> FsmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let target: Target = text(target, "target")?.parse()?;
        let d = convert(value(v, "value")?.clone(), target)?;
        out.write(Box::into_raw(Box::new(FsmValue(d))));
        Ok(())
    })
}

/// Compares two machines on `count` random words drawn from `seed` with
/// lengths up to `max_len`. `*counterexamples` (if not null) receives the
/// disagreeing words, one per line, or null when there are none.
///
/// # Safety
/// `a` and `b` must be live handles, `equivalent` writable and
/// `counterexamples` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_test_equiv(
    a: *const FsmValue,
    b: *const FsmValue,
    count: usize,
    seed: u64,
    max_len: usize,
    equivalent: *mut bool,
    counterexamples: *mut *mut c_char,
) -> FsmStatus {
    guard(|| {
        if !counterexamples.is_null() {
            counterexamples.write(ptr::null_mut());
        }
        let m1 = as_machine(value(a, "a")?.clone())?;
        let m2 = as_machine(value(b, "b")?.clone())?;
        let sample = Sample {
            count,
            seed,
            max_len,
        };
        let report = test_equiv_sm(&m1, &m2, &sample)?;
        if let (EquivReport::Counterexamples(ws), false) = (&report, counterexamples.is_null()) {
            let lines: Vec<String> = ws.iter().map(Word::to_string).collect();
            counterexamples.write(owned_string(lines.join("\n")));
        }
        put(equivalent, report.is_equivalent(), "equivalent")
    })
}

/// Decides whether a cfg or rg generates no words.
///
/// # Safety
/// `g` must be a live handle and `empty` writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_cfg_is_empty(g: *const FsmValue, empty: *mut bool) -> FsmStatus {
    guard(|| {
        let Definition::Grammar(g) = value(g, "grammar")? else {
            return Err(Failure(FsmStatus::Unsupported, "expected a grammar".into()));
        };
        put(empty, cfg_is_empty(g)?, "empty")
    })
}

/// Runs a combined tm on a tape of whitespace-separated tokens (`_` is the
/// blank). `*config` receives the final configuration, e.g.
/// `(h 7 (add1 _ I I I I I _))`.
///
/// # Safety
/// `c` must be a live handle, `tape` a NUL-terminated string and `config`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fsm_ctm_run(
    c: *const FsmValue,
    tape: *const c_char,
    head: usize,
    step_limit: usize,
    config: *mut *mut c_char,
) -> FsmStatus {
    guard(|| {
        let Definition::Ctm(c) = value(c, "ctm")? else {
            return Err(Failure(FsmStatus::Unsupported, "expected a ctm".into()));
        };
        let tape: Vec<Symbol> = text(tape, "tape")?
            .split_whitespace()
            .map(Symbol::new)
            .collect();
        let result = c.apply_with(tape, head, &limits(step_limit))?;
        put(config, owned_string(result.to_string()), "config")
    })
}

/// The message for the last failed call on this thread, or "" after a
/// successful one. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn fsm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
