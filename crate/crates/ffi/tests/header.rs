use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mre.h")
}

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "mre.h"

int main(void) {
    const double r = 0.70710678118654752;
    double re[8] = {r, 0, 0, 0, 0, 0, 0, r};
    double im[8] = {0};
    MreState *s = NULL;
    double v = 0.0;
    if (mre_state_new(3, re, im, 8, &s) != MRE_STATUS_OK) return 1;
    if (mre_state_pure(s, MRE_CONVENTION_PAIRING, &v) != MRE_STATUS_OK) return 2;
    mre_state_free(s);
    if (fabs(v - 1.0) > 1e-12) return 3;
    if (mre_state_new(1, re, im, 2, &s) != MRE_STATUS_UNSUPPORTED_SIZE) return 4;
    printf("%s|%.9f\n", mre_version(), v);
    return 0;
}
"#;

#[test]
fn header_declares_api() {
    let text = std::fs::read_to_string(header()).expect("generated header");
    for name in [
        "MRE_STATUS_OK = 0",
        "MRE_STATUS_PANIC = 5",
        "typedef struct MreState MreState;",
        "typedef struct MreDensity MreDensity;",
        "mre_state_new(",
        "mre_state_free(",
        "mre_state_pure(",
        "mre_state_assistant(",
        "mre_density_new(",
        "mre_density_mixed(",
        "mre_kn(",
        "mre_binary_entropy(",
        "mre_last_error(void)",
        "mre_version(void)",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

fn cc_available() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn c_program_compiles_and_runs() {
    if !cc_available() {
        eprintln!("cc not found; skipping");
        return;
    }
    let dir = std::env::temp_dir().join(format!("mre-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = header().parent().unwrap().to_path_buf();

    let syntax = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // target/<profile>/deps/header-* -> target/<profile>/libmre_ffi.a
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(Path::parent).map(|p| p.join("libmre_ffi.a"));
    let Some(lib) = lib.filter(|p| p.exists()) else {
        eprintln!("static library not built; link step skipped");
        return;
    };
    let bin = dir.join("main");
    let link = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8(run.stdout).unwrap(), format!("{}|1.000000000\n", env!("CARGO_PKG_VERSION")));
}
