use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "fscalc.h"

int main(void) {
    FscOperator *op = NULL;
    FscSpace *sp = NULL;
    bool inside = false;
    if (fsc_operator_new(1, &op) != FSC_STATUS_OK) return 10;
    if (fsc_space_new(FSC_SCALE_F, "6-eps", "2", "2", 12, FSC_BASE_BOUNDED_DOMAIN, &sp) != FSC_STATUS_OK) return 11;
    if (fsc_membership(sp, op, &inside, NULL) != FSC_STATUS_OK || !inside) return 12;
    FscSpace *bad = NULL;
    if (fsc_space_new(FSC_SCALE_F, "?", "2", "2", 12, FSC_BASE_BOUNDED_DOMAIN, &bad) != FSC_STATUS_PARSE) return 13;
    if (fsc_last_error() == NULL || strstr(fsc_last_error(), "parse") == NULL) return 14;
    fsc_space_free(sp);
    fsc_operator_free(op);
    puts("ok");
    return 0;
}
"#;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

/// `target/<profile>` of the running test binary, where the static library lands.
fn artifact_dir() -> PathBuf {
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(include_dir().join("fscalc.h")).unwrap();
    for name in [
        "typedef struct FscSpace FscSpace;",
        "FSC_STATUS_NOT_IN_DOMAIN = 6",
        "fsc_space_new(",
        "fsc_membership(",
        "fsc_sigma(",
        "fsc_embeds(",
        "fsc_plan(",
        "fsc_certificate_validate_json(",
        "fsc_certificate_free(",
        "fsc_string_free(",
        "fsc_last_error(void)",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = artifact_dir().join("libfscalc_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi-c-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let source = dir.join("smoke.c");
    let binary = dir.join("smoke");
    std::fs::write(&source, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(include_dir())
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&binary).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
