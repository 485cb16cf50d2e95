//! Compiles and runs a C program against the generated header and static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "vsa.h"

int main(void) {
    VsaHv *a = NULL, *b = NULL, *ab = NULL, *back = NULL;
    double s = 0.0;
    char msg[128];
    if (vsa_hv_random("c", "a", 1, 1000, VSA_REPR_BIPOLAR, &a) != VSA_STATUS_OK) return 10;
    if (vsa_hv_random("c", "b", 1, 1000, VSA_REPR_BIPOLAR, &b) != VSA_STATUS_OK) return 11;
    if (vsa_hv_bind(a, b, &ab) != VSA_STATUS_OK) return 12;
    if (vsa_hv_bind(ab, b, &back) != VSA_STATUS_OK) return 13;
    if (vsa_hv_similarity(back, a, VSA_METRIC_NORMALIZED_HAMMING, &s) != VSA_STATUS_OK || s != 0.0) return 14;
    if (vsa_hv_bind(a, NULL, &ab) != VSA_STATUS_NULL_POINTER) return 15;
    vsa_last_error_message(msg, sizeof msg);
    if (strcmp(msg, "b is null") != 0) return 16;
    printf("%s %zu\n", vsa_version(), vsa_hv_dim(a));
    vsa_hv_free(a); vsa_hv_free(b); vsa_hv_free(ab); vsa_hv_free(back);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    // target/<profile>/deps/<test-binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libvsa_ffi.a");
    assert!(lib.is_file(), "static library not found at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap_or_else(|e| panic!("running {cc}: {e}"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), format!("{} 1000", env!("CARGO_PKG_VERSION")));
}
