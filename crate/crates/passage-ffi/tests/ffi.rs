//! Exercises the C ABI from Rust: status codes, null handling, law handles,
//! and agreement with the core library. A final test compiles and runs a
//! small C program against the generated header and static library.

use std::ffi::CString;
use std::os::raw::c_int;

use passage_ffi::*;

fn call(f: impl FnOnce(*mut f64) -> PassageStatus) -> (PassageStatus, f64) {
    let mut out = f64::NAN;
    let status = f(&mut out as *mut f64);
    (status, out)
}

#[test]
fn type1_matches_core() {
    let (status, v) = call(|out| passage_type1_cdf(2.0, 1.0, 2.0, 10.0, 200.0, out));
    assert_eq!(status, PassageStatus::Ok);
    let core = passage::exact::ExpModel::new(2.0, 1.0, 2.0)
        .unwrap()
        .type1_cdf(&passage::exact::FirstPassageQuery::new(10.0, 200.0).unwrap())
        .unwrap();
    assert_eq!(v.to_bits(), core.to_bits());
}

#[test]
fn status_codes_map_errors() {
    let (s, _) = call(|out| passage_type1_cdf(-2.0, 1.0, 2.0, 10.0, 200.0, out));
    assert_eq!(s, PassageStatus::Domain);
    let (s, _) = call(|out| passage_normal_below(2.0, 1.0, 2.0, 10.0, 200.0, out));
    assert_eq!(s, PassageStatus::CriticalRate);
    let (s, _) = call(|out| passage_teugels_cdf(0.5, 0.5, 10.0, 2.0, 100.0, out));
    assert_eq!(s, PassageStatus::CriticalRate);
    let (s, _) = call(|out| passage_capital_solve_exact(2.0, 1.0, 0.9999, 50.0, 4.0, out));
    assert_eq!(s, PassageStatus::NoBracket);
    let s = passage_type1_cdf(2.0, 1.0, 2.0, 10.0, 200.0, std::ptr::null_mut());
    assert_eq!(s, PassageStatus::NullPointer);
}

#[test]
fn status_describe_is_static_text() {
    for status in [
        PassageStatus::Ok,
        PassageStatus::Domain,
        PassageStatus::NoBracket,
        PassageStatus::Panic,
    ] {
        let ptr = passage_status_describe(status);
        assert!(!ptr.is_null());
        let text = unsafe { std::ffi::CStr::from_ptr(ptr) }.to_str().unwrap();
        assert!(!text.is_empty());
    }
}

#[test]
fn kernel_reference_values_through_the_abi() {
    let (s, a) = call(|out| passage_ig_kernel_infty(1.0, 6.0, 15.0, 0.0, out));
    assert_eq!(s, PassageStatus::Ok);
    assert!((a - 0.943).abs() < 1e-3);
    let (s, b) = call(|out| passage_ig_kernel_at_critical(1.0, 6.0, 15.0, f64::INFINITY, out));
    assert_eq!(s, PassageStatus::Ok);
    assert!((b - 0.886).abs() < 1e-3);
    let (s, c) = call(|out| passage_ig_kernel(1.0, 6.0, 15.0, 1.0, 100.0, 0.0, out));
    assert_eq!(s, PassageStatus::Ok);
    assert!((c - 0.454).abs() < 1e-3);
}

#[test]
fn law_handles_round_trip() {
    let spec = CString::new("pareto(2.5,1)").unwrap();
    let mut law: *mut PassageLaw = std::ptr::null_mut();
    let s = unsafe { passage_law_parse(spec.as_ptr(), &mut law) };
    assert_eq!(s, PassageStatus::Ok);
    assert!(!law.is_null());

    let (mut mean, mut var, mut third) = (0.0f64, 0.0f64, f64::NAN);
    let mut has_third: c_int = -1;
    let s = unsafe { passage_law_moments(law, &mut mean, &mut var, &mut third, &mut has_third) };
    assert_eq!(s, PassageStatus::Ok);
    assert!((mean - 2.5 / 1.5).abs() < 1e-12);
    assert_eq!(has_third, 0, "pareto(2.5) has no third moment");
    unsafe { passage_law_free(law) };

    let bad = CString::new("cauchy(1)").unwrap();
    let mut law2: *mut PassageLaw = std::ptr::null_mut();
    let s = unsafe { passage_law_parse(bad.as_ptr(), &mut law2) };
    assert_eq!(s, PassageStatus::InvalidLaw);
    assert!(law2.is_null());
    unsafe { passage_law_free(std::ptr::null_mut()) }; // no-op
}

#[test]
fn mc_through_handles_is_deterministic() {
    let parse = |text: &str| {
        let c = CString::new(text).unwrap();
        let mut law: *mut PassageLaw = std::ptr::null_mut();
        let s = unsafe { passage_law_parse(c.as_ptr(), &mut law) };
        assert_eq!(s, PassageStatus::Ok);
        law
    };
    let t1 = parse("exponential(2)");
    let t = parse("exponential(2)");
    let y = parse("exponential(1)");
    let run = |workers: c_int| {
        let (mut p, mut se) = (0.0f64, 0.0f64);
        let s = unsafe {
            passage_mc_first_passage(t1, t, y, 2.0, 10.0, 50.0, 30_000, 9, workers, &mut p, &mut se)
        };
        assert_eq!(s, PassageStatus::Ok);
        (p, se)
    };
    let (p1, se1) = run(1);
    let (p2, _) = run(4);
    assert_eq!(p1.to_bits(), p2.to_bits());
    assert!(se1 > 0.0);
    // sanity against the exact value
    let exact = passage::exact::ExpModel::new(2.0, 1.0, 2.0)
        .unwrap()
        .type1_cdf(&passage::exact::FirstPassageQuery::new(10.0, 50.0).unwrap())
        .unwrap();
    assert!((p1 - exact).abs() <= 4.0 * se1);
    unsafe {
        passage_law_free(t1);
        passage_law_free(t);
        passage_law_free(y);
    }
}

#[test]
fn header_exists_and_names_the_surface() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/passage.h");
    let text = std::fs::read_to_string(header).expect("build.rs generates include/passage.h");
    for symbol in [
        "PassageStatus",
        "passage_type1_cdf",
        "passage_ig_kernel",
        "passage_law_parse",
        "passage_mc_first_passage",
        "passage_capital_solve_exact",
        "PASSAGE_STATUS_NO_BRACKET",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}

#[test]
fn c_program_links_and_runs() {
    // compile a short C client against the generated header and the
    // staticlib; skipped silently when no C compiler is on PATH
    let cc = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok());
    let Some(cc) = cc else {
        eprintln!("skipping: no C compiler found");
        return;
    };
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    // the staticlib lands in target/{profile}/ of the workspace
    let lib_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../target")
        .join(if cfg!(debug_assertions) { "debug" } else { "release" });
    let lib = lib_dir.join("libpassage_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("passage-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("demo.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "passage.h"

int main(void) {
    double v = 0.0;
    PassageStatus s = passage_type1_cdf(2.0, 1.0, 2.0, 10.0, 200.0, &v);
    if (s != PASSAGE_STATUS_OK) return 1;
    if (v < 0.697 || v > 0.701) return 2;
    s = passage_normal_below(2.0, 1.0, 2.0, 10.0, 200.0, &v);
    if (s != PASSAGE_STATUS_CRITICAL_RATE) return 3;
    printf("%.6f\n", v);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("demo");
    let compile = std::process::Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        compile.status.success(),
        "C compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = std::process::Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "C demo exited {:?}", run.status.code());
    std::fs::remove_dir_all(&dir).ok();
}
