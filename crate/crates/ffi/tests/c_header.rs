//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on the PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "heat_ansatz.h"

int main(void) {
    HaPoly *d2 = NULL;
    char *text = NULL;
    if (ha_poly_dk(2, &d2) != HA_STATUS_OK) return 1;
    if (ha_poly_to_string(d2, &text) != HA_STATUS_OK) return 2;
    printf("%s\n", text);
    ha_string_free(text);
    ha_poly_free(d2);

    HaPoly *bad = NULL;
    if (ha_poly_parse("y_1 +", HA_FAMILY_Y, &bad) != HA_STATUS_PARSE) return 3;
    char msg[128];
    if (ha_last_error(msg, sizeof msg) == 0) return 4;

    HaSeries *s = NULL;
    if (ha_series_new(1, 1, "0", "1:0,1:-1", "0", 10, &s) != HA_STATUS_OK) return 5;
    double psi = 0.0;
    if (ha_series_eval(s, 0.5, 1.5, &psi) != HA_STATUS_OK) return 6;
    int zero = 0;
    if (ha_series_heat_residual_is_zero(s, "2,3", &zero) != HA_STATUS_OK || !zero) return 7;
    ha_series_free(s);
    return 0;
}
"#;

fn cc() -> Option<String> {
    ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(|c| c.to_string())
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libheat_ansatz_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_header");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = work.join("main");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "y_3 + 6*y_1*y_2 + 4*y_1^3");
}
