//! Exercises the C entry points the way a foreign caller would: through
//! raw pointers, checking statuses, and releasing everything it receives.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use arkon_ffi::{
    arkon_string_free, arkon_theory_conclusions_json, arkon_theory_free, arkon_theory_generate,
    arkon_theory_parse, arkon_theory_print, arkon_theory_query, arkon_theory_translate,
    arkon_version, ArkonStatus, ArkonTheory, ArkonVerdict,
};

const CHAIN_2: &str = ">> A0000002\nr1: A0000002 => A0000001\nr2: A0000001 => A0000000\n";

unsafe fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let text = CStr::from_ptr(ptr).to_str().expect("library strings are UTF-8").to_owned();
    arkon_string_free(ptr);
    text
}

unsafe fn parse(text: &str) -> *mut ArkonTheory {
    let text = CString::new(text).unwrap();
    let mut theory: *mut ArkonTheory = ptr::null_mut();
    let status = arkon_theory_parse(text.as_ptr(), &mut theory);
    assert_eq!(status, ArkonStatus::Ok);
    assert!(!theory.is_null());
    theory
}

#[test]
fn parse_print_round_trips() {
    unsafe {
        let theory = parse(CHAIN_2);
        let mut printed: *mut c_char = ptr::null_mut();
        assert_eq!(arkon_theory_print(theory, &mut printed), ArkonStatus::Ok);
        assert_eq!(take_string(printed), CHAIN_2);
        arkon_theory_free(theory);
    }
}

#[test]
fn query_reports_the_verdict() {
    unsafe {
        let theory = parse(CHAIN_2);
        let query = CString::new("A0000000").unwrap();
        let mut verdict = ArkonVerdict::Undetermined;
        assert_eq!(
            arkon_theory_query(theory, query.as_ptr(), &mut verdict),
            ArkonStatus::Ok
        );
        assert_eq!(verdict, ArkonVerdict::ProvablyTrue);

        let negated = CString::new("-A0000000").unwrap();
        assert_eq!(
            arkon_theory_query(theory, negated.as_ptr(), &mut verdict),
            ArkonStatus::Ok
        );
        assert_eq!(verdict, ArkonVerdict::ProvablyFalse);
        arkon_theory_free(theory);
    }
}

#[test]
fn generate_builds_family_instances() {
    unsafe {
        let family = CString::new("hierarchies").unwrap();
        let mut theory: *mut ArkonTheory = ptr::null_mut();
        assert_eq!(
            arkon_theory_generate(family.as_ptr(), 2, 2, &mut theory),
            ArkonStatus::Ok
        );
        let query = CString::new("A0000000").unwrap();
        let mut verdict = ArkonVerdict::Undetermined;
        assert_eq!(
            arkon_theory_query(theory, query.as_ptr(), &mut verdict),
            ArkonStatus::Ok
        );
        assert_eq!(verdict, ArkonVerdict::ProvablyTrue);
        arkon_theory_free(theory);

        let mut missing_k: *mut ArkonTheory = ptr::null_mut();
        let dag = CString::new("dag").unwrap();
        assert_eq!(
            arkon_theory_generate(dag.as_ptr(), 3, 0, &mut missing_k),
            ArkonStatus::InvalidSpec
        );
        assert!(missing_k.is_null());

        let unknown = CString::new("pyramid").unwrap();
        assert_eq!(
            arkon_theory_generate(unknown.as_ptr(), 3, 0, &mut missing_k),
            ArkonStatus::InvalidSpec
        );
    }
}

#[test]
fn translate_renders_sentences() {
    unsafe {
        let theory = parse(CHAIN_2);
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(
            arkon_theory_translate(theory, ptr::null(), ptr::null(), &mut text),
            ArkonStatus::Ok
        );
        let sentences = take_string(text);
        assert_eq!(
            sentences,
            "A0000002 is an Arkon.\n\
             If A0000002 is an Arkon, then typically A0000001 is an Arkon.\n\
             If A0000001 is an Arkon, then typically A0000000 is an Arkon.\n"
        );

        let noun = CString::new("Blip").unwrap();
        let article = CString::new("a").unwrap();
        assert_eq!(
            arkon_theory_translate(theory, noun.as_ptr(), article.as_ptr(), &mut text),
            ArkonStatus::Ok
        );
        assert!(take_string(text).starts_with("A0000002 is a Blip."));
        arkon_theory_free(theory);
    }
}

#[test]
fn conclusions_export_as_json() {
    unsafe {
        let theory = parse(CHAIN_2);
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(
            arkon_theory_conclusions_json(theory, &mut text),
            ArkonStatus::Ok
        );
        let json: serde_json::Value = serde_json::from_str(&take_string(text)).unwrap();
        let literals = json["literals"].as_array().unwrap();
        assert!(literals.iter().any(|entry| {
            entry["literal"] == "A0000000" && entry["defeasible"] == "proved"
        }));
        arkon_theory_free(theory);
    }
}

#[test]
fn null_and_malformed_arguments_are_rejected() {
    unsafe {
        let mut theory: *mut ArkonTheory = ptr::null_mut();
        assert_eq!(
            arkon_theory_parse(ptr::null(), &mut theory),
            ArkonStatus::NullArgument
        );
        let text = CString::new(CHAIN_2).unwrap();
        assert_eq!(
            arkon_theory_parse(text.as_ptr(), ptr::null_mut()),
            ArkonStatus::NullArgument
        );
        let garbage = CString::new("r1: this is not a rule").unwrap();
        assert_eq!(
            arkon_theory_parse(garbage.as_ptr(), &mut theory),
            ArkonStatus::ParseFailed
        );

        let parsed = parse(CHAIN_2);
        let bad_literal = CString::new("--A0").unwrap();
        let mut verdict = ArkonVerdict::Undetermined;
        assert_eq!(
            arkon_theory_query(parsed, bad_literal.as_ptr(), &mut verdict),
            ArkonStatus::InvalidLiteral
        );
        assert_eq!(
            arkon_theory_query(ptr::null(), bad_literal.as_ptr(), &mut verdict),
            ArkonStatus::NullArgument
        );
        arkon_theory_free(parsed);

        arkon_theory_free(ptr::null_mut());
        arkon_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_a_static_string() {
    let version = unsafe { CStr::from_ptr(arkon_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("arkon.h");
    let text = std::fs::read_to_string(header).expect("the build script writes the header");
    for symbol in [
        "arkon_theory_parse",
        "arkon_theory_generate",
        "arkon_theory_free",
        "arkon_theory_print",
        "arkon_theory_translate",
        "arkon_theory_query",
        "arkon_theory_conclusions_json",
        "arkon_string_free",
        "arkon_version",
        "typedef struct ArkonTheory ArkonTheory;",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}
