//! Exercise the C ABI surface: status codes, handles, ownership, and the
//! JSON suite, plus an end-to-end check that compiles a real C program
//! against the generated header and static library.

use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use divax_ffi::{
    divax_axiom_suite_json, divax_distribution_create, divax_distribution_free,
    divax_distribution_len, divax_last_error_message, divax_ln_alpha, divax_relative_entropy,
    divax_string_free, DivaxDistribution, DivaxDomain, DivaxStatus,
};

fn create(entries: &[f64], domain: DivaxDomain) -> *mut DivaxDistribution {
    let mut handle = ptr::null_mut();
    let status =
        unsafe { divax_distribution_create(entries.as_ptr(), entries.len(), domain, &mut handle) };
    assert_eq!(status, DivaxStatus::Ok);
    assert!(!handle.is_null());
    handle
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(divax_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn ln_alpha_roundtrip_and_domain_error() {
    let mut out = 0.0f64;
    let status = unsafe { divax_ln_alpha(2.0, 2.0, &mut out) };
    assert_eq!(status, DivaxStatus::Ok);
    assert!((out - 0.5).abs() < 1e-15);

    let status = unsafe { divax_ln_alpha(-1.0, 2.0, &mut out) };
    assert_eq!(status, DivaxStatus::DomainError);
    assert!(last_error().contains("requires x > 0"), "{}", last_error());

    let status = unsafe { divax_ln_alpha(2.0, f64::NAN, &mut out) };
    assert_eq!(status, DivaxStatus::InvalidArgument);

    let status = unsafe { divax_ln_alpha(2.0, 2.0, ptr::null_mut()) };
    assert_eq!(status, DivaxStatus::NullPointer);
}

#[test]
fn distribution_lifecycle_and_validation() {
    let handle = create(&[0.5, 0.5], DivaxDomain::Open);
    assert_eq!(unsafe { divax_distribution_len(handle) }, 2);
    unsafe { divax_distribution_free(handle) };
    unsafe { divax_distribution_free(ptr::null_mut()) };

    let mut out = ptr::null_mut();
    let bad = [0.3, 0.3, 0.3];
    let status =
        unsafe { divax_distribution_create(bad.as_ptr(), bad.len(), DivaxDomain::Open, &mut out) };
    assert_eq!(status, DivaxStatus::InvalidArgument);
    assert!(last_error().contains("sum"), "{}", last_error());

    let zeros = [1.0, 0.0];
    let status = unsafe {
        divax_distribution_create(zeros.as_ptr(), zeros.len(), DivaxDomain::Open, &mut out)
    };
    assert_eq!(status, DivaxStatus::InvalidArgument);
    let handle = create(&zeros, DivaxDomain::Closed);
    unsafe { divax_distribution_free(handle) };
}

#[test]
fn relative_entropy_through_the_abi() {
    let p = create(&[0.5, 0.5], DivaxDomain::Open);
    let q = create(&[0.25, 0.75], DivaxDomain::Open);
    let mut value = 0.0;
    let mut finite = 0;
    let status = unsafe { divax_relative_entropy(p, q, 1.0, &mut value, &mut finite) };
    assert_eq!(status, DivaxStatus::Ok);
    assert_eq!(finite, 1);
    assert!((value - 0.14384103622589042).abs() < 1e-14);

    let status = unsafe { divax_relative_entropy(p, q, 2.0, &mut value, &mut finite) };
    assert_eq!(status, DivaxStatus::Ok);
    assert!((value - 1.0 / 3.0).abs() < 1e-14);
    unsafe {
        divax_distribution_free(p);
        divax_distribution_free(q);
    }

    // Closed domain, alpha = 1, missing support: +infinity with finite = 0.
    let p = create(&[0.5, 0.5], DivaxDomain::Closed);
    let q = create(&[1.0, 0.0], DivaxDomain::Closed);
    let status = unsafe { divax_relative_entropy(p, q, 1.0, &mut value, &mut finite) };
    assert_eq!(status, DivaxStatus::Ok);
    assert_eq!(finite, 0);
    assert!(value.is_infinite());

    // Mismatched domains are rejected.
    let open_q = create(&[0.25, 0.75], DivaxDomain::Open);
    let status = unsafe { divax_relative_entropy(p, open_q, 1.0, &mut value, &mut finite) };
    assert_eq!(status, DivaxStatus::InvalidArgument);
    unsafe {
        divax_distribution_free(p);
        divax_distribution_free(q);
        divax_distribution_free(open_q);
    }
}

#[test]
fn axiom_suite_json_reports_all_passes() {
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { divax_axiom_suite_json(2.0, 42, 10, 6, &mut out) };
    assert_eq!(status, DivaxStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { divax_string_free(out) };

    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for report in reports {
        assert_eq!(report["verdict"], "pass");
        assert_eq!(report["measure"], "divergence");
    }
    assert_eq!(doc["summary"]["fail"], 0);

    // trials = 0 is rejected, not run.
    let status = unsafe { divax_axiom_suite_json(2.0, 42, 0, 6, &mut out) };
    assert_eq!(status, DivaxStatus::InvalidArgument);
}

/// Build and run a C client against include/divax.h and the staticlib.
#[test]
fn c_client_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    assert!(
        include_dir.join("divax.h").is_file(),
        "header not generated"
    );

    // The staticlib lands next to this test binary's deps directory, but
    // `cargo test` alone may not have produced it; build it on demand.
    let mut lib_dir = std::env::current_exe().unwrap();
    lib_dir.pop(); // test binary
    lib_dir.pop(); // deps/
    let staticlib = lib_dir.join("libdivax_ffi.a");
    if !staticlib.is_file() {
        let mut args = vec!["build", "-p", "divax-ffi", "--quiet"];
        if lib_dir.file_name().is_some_and(|n| n == "release") {
            args.push("--release");
        }
        let build = Command::new(env!("CARGO"))
            .args(&args)
            .current_dir(&manifest)
            .output()
            .expect("cargo available");
        assert!(
            build.status.success(),
            "cargo build -p divax-ffi failed: {}",
            String::from_utf8_lossy(&build.stderr)
        );
    }
    assert!(
        staticlib.is_file(),
        "staticlib missing at {}",
        staticlib.display()
    );

    let dir = tempfile_dir();
    let c_src = dir.join("smoke.c");
    std::fs::write(
        &c_src,
        r#"
#include <math.h>
#include <stdio.h>
#include "divax.h"

int main(void) {
    double out = 0.0;
    if (divax_ln_alpha(2.0, 2.0, &out) != DIVAX_STATUS_OK) return 1;
    if (fabs(out - 0.5) > 1e-15) return 2;

    const double pv[2] = {0.5, 0.5};
    const double qv[2] = {0.25, 0.75};
    DivaxDistribution *p = NULL, *q = NULL;
    if (divax_distribution_create(pv, 2, DIVAX_DOMAIN_OPEN, &p) != DIVAX_STATUS_OK) return 3;
    if (divax_distribution_create(qv, 2, DIVAX_DOMAIN_OPEN, &q) != DIVAX_STATUS_OK) return 4;
    double value = 0.0;
    int finite = 0;
    if (divax_relative_entropy(p, q, 2.0, &value, &finite) != DIVAX_STATUS_OK) return 5;
    if (!finite || fabs(value - 1.0/3.0) > 1e-14) return 6;
    divax_distribution_free(p);
    divax_distribution_free(q);

    char *json = NULL;
    if (divax_axiom_suite_json(2.0, 7, 5, 4, &json) != DIVAX_STATUS_OK) return 7;
    if (!json) return 8;
    printf("%s", json);
    divax_string_free(json);
    return 0;
}
"#,
    )
    .unwrap();
    let binary = dir.join("smoke");
    let compile = Command::new("cc")
        .arg(&c_src)
        .arg("-I")
        .arg(&include_dir)
        .arg(&staticlib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("cc available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&binary).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "C client exit status");
    let doc: serde_json::Value =
        serde_json::from_slice(&run.stdout).expect("C client printed the JSON report");
    assert_eq!(doc["summary"]["fail"], 0);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divax-ffi-abi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
