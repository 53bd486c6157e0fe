use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use gamma_aq_ffi::*;

const DUAL_F2: &str = "field Fp 2\nalgebra\n basis 1 x\n unit 1\nend\nmodule regular\npresentation\n vars x\n rel x^2\n ci\nend\n";

fn parse(text: &str) -> (GammaAqStatus, *mut GammaAqProblem) {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    let s = unsafe { gamma_aq_problem_parse(c.as_ptr(), &mut p) };
    (s, p)
}

fn json(r: *const GammaAqReport) -> serde_json::Value {
    let s = unsafe { CStr::from_ptr(gamma_aq_report_json(r)) };
    serde_json::from_str(s.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gamma_aq_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn pi0_and_piy_through_the_abi() {
    let (s, p) = parse(DUAL_F2);
    assert_eq!(s, GammaAqStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gamma_aq_pi0(p, 0, &mut r) }, GammaAqStatus::Ok);
    assert_eq!(json(r)["result"]["verdict"], "MATCH");
    assert_eq!(unsafe { gamma_aq_report_outcome(r) }, GammaAqOutcome::Pass);
    unsafe { gamma_aq_report_free(r) };

    let mut opts = GammaAqPiyOptions::default();
    unsafe { gamma_aq_piy_options_default(&mut opts) };
    opts.weight = 1;
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gamma_aq_piy(p, &opts, ptr::null(), &mut r) }, GammaAqStatus::Ok);
    let v = json(r);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["report"]["dims"], serde_json::json!([2, 2]));
    unsafe { gamma_aq_report_free(r) };

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gamma_aq_classical(p, 1, &mut r) }, GammaAqStatus::Ok);
    assert_eq!(json(r)["result"]["dim"], 2);
    unsafe {
        gamma_aq_report_free(r);
        gamma_aq_problem_free(p);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let (s, p) = parse("field Q\nalgebra\n basis 1 x y\n unit 1\n x * y = x\nend\nmodule regular\n");
    assert_eq!(s, GammaAqStatus::Validation);
    assert!(p.is_null());
    assert!(last_error().contains("commutativity"), "{}", last_error());

    let (s, _) = parse("field Q\nfrobnicate\n");
    assert_eq!(s, GammaAqStatus::Parse);
    assert!(last_error().contains("frobnicate"));

    let mut p = ptr::null_mut();
    assert_eq!(unsafe { gamma_aq_problem_parse(ptr::null(), &mut p) }, GammaAqStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { gamma_aq_problem_parse(bad.as_ptr().cast(), &mut p) },
        GammaAqStatus::InvalidUtf8
    );

    let (_, p) = parse(DUAL_F2);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gamma_aq_pi0(p, 1, &mut r) }, GammaAqStatus::InvalidArgument);
    assert!(r.is_null());
    assert_eq!(unsafe { gamma_aq_pi0(ptr::null(), 2, &mut r) }, GammaAqStatus::NullPointer);
    unsafe {
        gamma_aq_problem_free(p);
        gamma_aq_problem_free(ptr::null_mut());
        gamma_aq_report_free(ptr::null_mut());
    }
    assert!(unsafe { gamma_aq_report_json(ptr::null()) }.is_null());
    assert_eq!(unsafe { gamma_aq_report_outcome(ptr::null()) }, GammaAqOutcome::Error);
}

#[test]
fn resource_cap_yields_an_error_report() {
    let text = "field Fp 3\nalgebra\n basis 1 x x2\n unit 1\n x * x = x2\nend\nmodule regular\n";
    let (_, p) = parse(text);
    let opts = GammaAqPiyOptions {
        trunc: 4,
        cap: 2000,
        ..Default::default()
    };
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gamma_aq_piy(p, &opts, ptr::null(), &mut r) }, GammaAqStatus::Ok);
    assert_eq!(unsafe { gamma_aq_report_outcome(r) }, GammaAqOutcome::Error);
    assert_eq!(json(r)["result"]["largest_feasible"]["trunc"], 3);
    unsafe {
        gamma_aq_report_free(r);
        gamma_aq_problem_free(p);
    }
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let cdir = CString::new(dir.path().to_str().unwrap()).unwrap();
    let (_, p) = parse(DUAL_F2);
    let run = || {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { gamma_aq_piy(p, ptr::null(), cdir.as_ptr(), &mut r) }, GammaAqStatus::Ok);
        let v = json(r);
        unsafe { gamma_aq_report_free(r) };
        v["result"]["cache"].as_str().unwrap().to_string()
    };
    assert_eq!(run(), "miss");
    assert_eq!(run(), "hit");
    unsafe { gamma_aq_problem_free(p) };
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/gamma_aq.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["gamma_aq_problem_parse", "gamma_aq_piy", "gamma_aq_report_json", "gamma_aq_last_error"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"gamma_aq.h\"\nint main(void) { GammaAqPiyOptions o; gamma_aq_piy_options_default(&o); \
         return o.trunc == -1 ? 0 : 1; }\n",
    )
    .unwrap();
    let out = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(gamma_aq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
