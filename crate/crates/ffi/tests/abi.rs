use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use modrep_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    modrep_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = modrep_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn tower_lifecycle_and_params() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(modrep_tower_new(9, &mut t), ModrepStatus::Ok);
        assert!(last_error().is_none());
        let (mut p, mut n, mut q) = (0, 0, 0);
        assert_eq!(
            modrep_tower_params(t, &mut p, &mut n, &mut q),
            ModrepStatus::Ok
        );
        assert_eq!((p, n, q), (3, 2, 9));
        assert_eq!(
            modrep_tower_params(t, ptr::null_mut(), ptr::null_mut(), &mut q),
            ModrepStatus::Ok
        );
        modrep_tower_free(t);
        modrep_tower_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(modrep_tower_new(6, &mut t), ModrepStatus::InvalidArgument);
        assert!(t.is_null());
        assert!(last_error().unwrap().contains('6'));
        assert_eq!(
            modrep_tower_new(5, ptr::null_mut()),
            ModrepStatus::NullPointer
        );
        assert_eq!(
            modrep_tower_params(
                ptr::null(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut()
            ),
            ModrepStatus::NullPointer
        );
        assert_eq!(modrep_tower_new(5, &mut t), ModrepStatus::Ok);
        assert!(last_error().is_none());
        let mut out = ptr::null_mut();
        let bad = [0xffu8, 0];
        assert_eq!(
            modrep_table_json(t, bad.as_ptr().cast(), &mut out),
            ModrepStatus::InvalidUtf8
        );
        let form = CString::new("no_such_form").unwrap();
        assert_eq!(
            modrep_diagram_json(t, 3, 1, form.as_ptr(), &mut out),
            ModrepStatus::InvalidArgument
        );
        assert_eq!(
            modrep_diagram_json(t, 9, 1, ptr::null(), &mut out),
            ModrepStatus::InvalidArgument
        );
        assert!(out.is_null());
        modrep_tower_free(t);
        modrep_string_free(ptr::null_mut());
    }
}

#[test]
fn tables_and_diagram_as_json() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(modrep_tower_new(3, &mut t), ModrepStatus::Ok);
        let what = CString::new("chars").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            modrep_table_json(t, what.as_ptr(), &mut out),
            ModrepStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["characters"].as_array().unwrap().len(), 6);
        modrep_tower_free(t);

        assert_eq!(modrep_tower_new(5, &mut t), ModrepStatus::Ok);
        let form = CString::new("gl2_extended").unwrap();
        assert_eq!(
            modrep_diagram_json(t, 3, 2, form.as_ptr(), &mut out),
            ModrepStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["matrices"]["f"].as_array().unwrap().len(), 4);
        modrep_tower_free(t);
    }
}

#[test]
fn verify_report_matches_across_calls() {
    let qs = [5u64, 7];
    let suites = CString::new("serre, diagram").unwrap();
    let run = || unsafe {
        let mut out = ptr::null_mut();
        let mut failures = usize::MAX;
        let st = modrep_verify(
            qs.as_ptr(),
            qs.len(),
            suites.as_ptr(),
            7,
            ptr::null(),
            &mut out,
            &mut failures,
        );
        assert_eq!(st, ModrepStatus::Ok, "{:?}", last_error());
        (take(out), failures)
    };
    let (a, fa) = run();
    let (b, _) = run();
    assert_eq!(fa, 0);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 7);

    let nonsense = CString::new("nonsense").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe {
        modrep_verify(
            qs.as_ptr(),
            qs.len(),
            nonsense.as_ptr(),
            0,
            ptr::null(),
            &mut out,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, ModrepStatus::InvalidArgument);
    assert!(out.is_null());
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(modrep_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "modrep.h"

int main(void) {
    ModrepTower *t = NULL;
    if (modrep_tower_new(4, &t) != MODREP_STATUS_OK) return 1;
    uint32_t p = 0, n = 0, q = 0;
    if (modrep_tower_params(t, &p, &n, &q) != MODREP_STATUS_OK) return 2;
    if (p != 2 || n != 2 || q != 4) return 3;
    modrep_tower_free(t);
    if (modrep_tower_new(10, &t) != MODREP_STATUS_INVALID_ARGUMENT) return 4;
    if (modrep_last_error_message() == NULL) return 5;
    uint64_t qs[1] = {5};
    char *out = NULL;
    size_t failures = 99;
    if (modrep_verify(qs, 1, "fields", 0, "tsv", &out, &failures) != MODREP_STATUS_OK) return 6;
    if (failures != 0 || strncmp(out, "suite\t", 6) != 0) return 7;
    modrep_string_free(out);
    puts("ok");
    return 0;
}
"#;

/// Compiles a C client against the generated header and the static library.
#[test]
fn c_client_links_against_header() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/abi-<hash>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libmodrep_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("modrep-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    let exe = dir.join("client");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    std::fs::remove_dir_all(&dir).ok();
}
