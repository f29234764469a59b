//! Compiles and runs a small C program against the generated header and the
//! static library, proving the ABI is usable from plain C.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "backaction.h"

static const char *PROBLEM =
  "{"
  "  \"dimension\": 2,"
  "  \"state\": {\"type\": \"pure\", \"data\": [[0.9510565162951535, 0.0], [0.3090169943749474, 0.0]]},"
  "  \"basis_a\": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],"
  "  \"basis_b\": [[[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]],"
  "               [[0.7071067811865476, 0.0], [-0.7071067811865476, 0.0]]]"
  "}";

int main(void) {
    BaScenario *scenario = NULL;
    BaStatus st = ba_scenario_from_json(PROBLEM, &scenario);
    if (st != BA_OK) { fprintf(stderr, "parse: %s\n", ba_status_message(st)); return 1; }
    size_t d = ba_scenario_dimension(scenario);
    if (d != 2) return 2;

    double basis[2 * 2 * 2];
    st = ba_zezd_basis(scenario, NULL, 0, basis);
    if (st != BA_OK) { fprintf(stderr, "zezd: %s\n", ba_status_message(st)); return 3; }

    double err = 1.0, dis = 1.0;
    st = ba_err_dis(scenario, basis, &err, &dis);
    if (st != BA_OK) return 4;
    if (err > 1e-12 || dis > 1e-12) { fprintf(stderr, "err %g dis %g\n", err, dis); return 5; }

    double p[2] = {0.727, 0.273}, q[2] = {0.978, 0.022};
    double bound = 0.0;
    int zezd = -1;
    st = ba_tradeoff_bound(p, q, 2, &bound, &zezd);
    if (st != BA_OK || zezd != 0) return 6;
    if (bound < 0.1447 || bound > 0.1448) { fprintf(stderr, "bound %g\n", bound); return 7; }

    ba_scenario_free(scenario);
    printf("c-smoke-ok bound=%.6f\n", bound);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    // The staticlib is produced alongside this test binary's deps directory.
    let target_dir = std::env::var("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|_| manifest.join("../../target"));
    let lib_dir = target_dir.join("debug");
    let staticlib = lib_dir.join("libbackaction_ffi.a");
    assert!(
        staticlib.exists(),
        "staticlib not found at {}",
        staticlib.display()
    );
    let which_cc = Command::new("cc").arg("--version").output();
    if which_cc.is_err() {
        eprintln!("no C compiler available; skipping the C smoke test");
        return;
    }

    let work = std::env::temp_dir().join("backaction-c-smoke");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let exe = work.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();

    let compile = Command::new("cc")
        .arg(&src)
        .arg("-o")
        .arg(&exe)
        .arg(format!("-I{}", include_dir.display()))
        .arg(staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .output()
        .expect("cc invocation");
    assert!(
        compile.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("smoke binary runs");
    assert_eq!(
        run.status.code(),
        Some(0),
        "smoke program failed:\n{}\n{}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c-smoke-ok"));
}
