use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sepgpt_ffi::*;

fn last_error() -> Option<String> {
    let p = sepgpt_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn play(n: usize, theory: &str, qubits: usize, rounds: u64, seed: u64) -> (SepgptStatus, *mut SepgptGameResult) {
    let t = CString::new(theory).unwrap();
    let mut g = ptr::null_mut();
    let st = unsafe { sepgpt_play(n, t.as_ptr(), qubits, rounds, seed, &mut g) };
    (st, g)
}

#[test]
fn sep_game_is_perfect() {
    let (st, g) = play(12, "sep", 0, 2000, 7);
    assert_eq!(st, SepgptStatus::Ok);
    assert!(last_error().is_none());
    unsafe {
        assert_eq!(sepgpt_game_success(g), 1.0);
        assert_eq!(sepgpt_game_wins(g), 2000);
        assert_eq!(sepgpt_game_rounds(g), 2000);
        sepgpt_game_free(g);
    }
}

#[test]
fn too_few_qubits_is_unsupported() {
    let (st, g) = play(5, "quantum", 2, 10, 1);
    assert_eq!(st, SepgptStatus::UnsupportedInstance);
    assert!(g.is_null());
    assert!(last_error().unwrap().contains("unsupported-instance"));
    let name = unsafe { CStr::from_ptr(sepgpt_status_name(st)) };
    assert_eq!(name.to_str().unwrap(), "unsupported-instance");
}

#[test]
fn bad_arguments() {
    assert_eq!(play(12, "nonsense", 0, 10, 1).0, SepgptStatus::InvalidArgument);
    assert_eq!(play(1, "sep", 0, 10, 1).0, SepgptStatus::InvalidArgument);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sepgpt_play(12, ptr::null(), 0, 10, 1, &mut g) }, SepgptStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { sepgpt_play(12, bad.as_ptr().cast(), 0, 10, 1, &mut g) }, SepgptStatus::Utf8);
    let t = CString::new("sep").unwrap();
    assert_eq!(unsafe { sepgpt_play(12, t.as_ptr(), 0, 10, 1, ptr::null_mut()) }, SepgptStatus::NullPointer);
    unsafe {
        assert!(sepgpt_game_success(ptr::null()).is_nan());
        assert!(!sepgpt_report_passed(ptr::null()));
        assert!(sepgpt_report_json(ptr::null()).is_null());
        sepgpt_game_free(ptr::null_mut());
        sepgpt_report_free(ptr::null_mut());
    }
}

#[test]
fn suite_report_matches_library() {
    let name = CString::new("table1-sweep").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { sepgpt_run_suite(name.as_ptr(), 42, 100, &mut r) }, SepgptStatus::Ok);
    unsafe {
        assert!(sepgpt_report_passed(r));
        assert_eq!(sepgpt_report_check_count(r), 66);
        let json = CStr::from_ptr(sepgpt_report_json(r)).to_str().unwrap().to_owned();
        let opts = sepgpt::SuiteOptions { seed: 42, rounds: 100, ..Default::default() };
        let direct = sepgpt::run_suite(sepgpt::Suite::Table1Sweep, &opts).unwrap();
        assert_eq!(json, sepgpt::report::serialize(&direct).unwrap());
        sepgpt_report_free(r);
    }
    let unknown = CString::new("no-such-suite").unwrap();
    assert_eq!(unsafe { sepgpt_run_suite(unknown.as_ptr(), 0, 1, &mut r) }, SepgptStatus::InvalidArgument);
    assert!(r.is_null());
}

#[test]
fn counting_and_pair_bounds() {
    let (mut m, mut q) = (0usize, 0usize);
    assert_eq!(unsafe { sepgpt_sep_vs_qubit_count(2, &mut m, &mut q) }, SepgptStatus::Ok);
    assert_eq!((m, q), (4, 8));
    assert_eq!(unsafe { sepgpt_sep_vs_qubit_count(5, &mut m, &mut q) }, SepgptStatus::Ok);
    assert_eq!((m, q), (10, 18));
    assert_eq!(unsafe { sepgpt_sep_vs_qubit_count(0, &mut m, &mut q) }, SepgptStatus::InvalidArgument);

    let x = [1.0, 0.0, 0.0];
    let z = [0.0, 0.0, 1.0];
    let xx = SepgptProductState { first: x, second: x };
    let zz = SepgptProductState { first: z, second: z };
    let mut v = f64::NAN;
    assert_eq!(unsafe { sepgpt_arai_dot_sum(&xx, &zz, &mut v) }, SepgptStatus::Ok);
    assert_eq!(v, 0.0);
    assert_eq!(unsafe { sepgpt_helstrom_bound(&xx, &zz, &mut v) }, SepgptStatus::Ok);
    // overlap 1/4, so (1 + sqrt(3/4)) / 2
    assert!((v - (1.0 + 0.75f64.sqrt()) / 2.0).abs() < 1e-12);

    let short = SepgptProductState { first: [0.5, 0.0, 0.0], second: x };
    assert_eq!(unsafe { sepgpt_arai_dot_sum(&short, &zz, &mut v) }, SepgptStatus::InvalidArgument);
    assert_eq!(unsafe { sepgpt_arai_dot_sum(ptr::null(), &zz, &mut v) }, SepgptStatus::NullPointer);
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sepgpt.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for f in [
        "sepgpt_last_error",
        "sepgpt_status_name",
        "sepgpt_run_suite",
        "sepgpt_report_free",
        "sepgpt_play",
        "sepgpt_game_free",
        "sepgpt_sep_vs_qubit_count",
        "sepgpt_arai_dot_sum",
        "sepgpt_helstrom_bound",
        "SEPGPT_STATUS_UNSUPPORTED_INSTANCE = 2",
        "typedef struct SepgptReport SepgptReport",
    ] {
        assert!(text.contains(f), "header lacks {f}");
    }
}

/// Builds a small C program against the header and static library. Skipped
/// when no C compiler or static archive is around.
#[test]
fn c_program_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let Some(profile_dir) = exe.parent().and_then(Path::parent) else { return };
    let lib = profile_dir.join("libsepgpt_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let bin = Path::new(env!("CARGO_TARGET_TMPDIR")).join("sepgpt_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{:?} {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
