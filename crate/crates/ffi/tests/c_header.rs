//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "agwwo.h"

int main(void) {
    AgwwoScenario *scn = NULL;
    if (agwwo_scenario_new_default(3, &scn) != AGWWO_STATUS_OK) return 1;
    AgwwoRunOptions opts = { 4, 3, 9 };
    AgwwoRun *run = NULL;
    if (agwwo_run(scn, AGWWO_ALGORITHM_AGA, &opts, &run) != AGWWO_STATUS_OK) return 2;
    if (agwwo_run_trace_len(run) != 4) return 3;
    AgwwoTracePoint pt;
    if (agwwo_run_trace_point(run, 3, &pt) != AGWWO_STATUS_OK || pt.iteration != 3) return 4;
    if (agwwo_run_trace_point(run, 99, &pt) != AGWWO_STATUS_INVALID_ARGUMENT) return 5;
    char msg[128];
    if (agwwo_last_error(msg, sizeof msg) == 0) return 6;
    if (!(agwwo_run_network_energy(run) > 0.0)) return 7;
    printf("%s %.3f\n", agwwo_version(), agwwo_run_network_energy(run));
    agwwo_run_free(run);
    agwwo_scenario_free(scn);
    return 0;
}
"#;

fn profile_dir() -> PathBuf {
    // Test binaries live in <target>/<profile>/deps.
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = profile_dir().join("libagwwo_ffi.a");
    if !lib.exists() {
        panic!("static library not found at {}", lib.display());
    }
    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("main.c");
    let bin = work.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
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
        .expect("run cc");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(env!("CARGO_PKG_VERSION")), "{text}");
}
