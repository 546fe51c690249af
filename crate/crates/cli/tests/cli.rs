//! End-to-end tests of the `holder` binary: subcommand wiring, exit codes,
//! file formats and output determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn holder(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holder"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holder-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn gen_weierstrass_writes_payload_and_sidecar() {
    let dir = workdir("gen-w");
    let out = holder(
        &[
            "gen",
            "weierstrass",
            "--a",
            "0.7071",
            "--b",
            "2",
            "--n",
            "2^16",
            "--out",
            "w.f64",
        ],
        &dir,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let payload = fs::read(dir.join("w.f64")).unwrap();
    assert_eq!(payload.len(), 65536 * 8);
    let header: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("w.f64.json")).unwrap()).unwrap();
    assert_eq!(header["length"], 65536);
    assert_eq!(header["provenance"]["generator"], "weierstrass");
}

#[test]
fn gen_fabe_sidecar_lists_block_boundaries() {
    let dir = workdir("gen-f");
    let out = holder(
        &[
            "gen", "fabe", "--alpha", "0.5", "--growth", "2", "--eps", "0.5", "--nmax", "3", "--n",
            "4096", "--out", "f.f64",
        ],
        &dir,
    );
    assert_eq!(code(&out), 0);
    let header: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("f.f64.json")).unwrap()).unwrap();
    assert_eq!(
        header["provenance"]["params"]["block_seq"],
        serde_json::json!([2, 4, 8, 16])
    );
}

#[test]
fn gen_cex1_infeasible_truncation_exits_2_with_feasible_count() {
    let dir = workdir("gen-c");
    let out = holder(
        &[
            "gen", "cex1", "--alpha", "0.5", "--eps", "0.5", "--blocks", "9", "--n", "4096",
            "--out", "c.f64",
        ],
        &dir,
    );
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("feasible"), "{err}");
}

#[test]
fn analyze_zero_signal_exits_3_with_partial_report() {
    let dir = workdir("an-zero");
    fs::write(dir.join("z.f64"), vec![0u8; 1024 * 8]).unwrap();
    fs::write(
        dir.join("z.f64.json"),
        r#"{"length":1024,"x0":0.0,"dx":0.0009765625,"extension":"periodic"}"#,
    )
    .unwrap();
    let out = holder(&["analyze", "z.f64"], &dir);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["degenerate"], true);
    assert!(report["estimates"]["oracle_lower"].is_null());
}

#[test]
fn analyze_weierstrass_recovers_the_index() {
    let dir = workdir("an-w");
    assert_eq!(
        code(&holder(
            &[
                "gen",
                "weierstrass",
                "--a",
                "0.7071",
                "--b",
                "2",
                "--n",
                "2^13",
                "--out",
                "w.f64"
            ],
            &dir
        )),
        0
    );
    let out = holder(&["analyze", "w.f64"], &dir);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    for name in [
        "oracle_lower",
        "oracle_upper",
        "wavelet_lower",
        "wavelet_upper",
    ] {
        let slope = report["estimates"][name]["diagnostics"]["regression_slope"]
            .as_f64()
            .unwrap_or_else(|| panic!("{name} missing"));
        assert!((slope - 0.5).abs() < 0.07, "{name} = {slope}");
    }
}

#[test]
fn analyze_pyramid_input_flags_naive_slope() {
    let dir = workdir("an-p");
    assert_eq!(
        code(&holder(
            &[
                "gen",
                "gap-pyramid",
                "--alpha",
                "0.5",
                "--pattern",
                "alternating",
                "--jmax",
                "24",
                "--out",
                "gap.json"
            ],
            &dir
        )),
        0
    );
    let out = holder(
        &["analyze", "gap.json", "--M", "1", "--window", "16:21"],
        &dir,
    );
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["input"]["kind"], "pyramid");
    assert!(report["criterion"].is_object());
    let upper = report["estimates"]["wavelet_upper"]["value"]
        .as_f64()
        .unwrap();
    assert!((upper - 0.5).abs() <= 0.03, "upper {upper}");
    assert_eq!(
        report["estimates"]["naive_upper"]["diagnostics"]["non_representative"],
        true
    );
}

#[test]
fn analyze_is_deterministic() {
    let dir = workdir("an-det");
    assert_eq!(
        code(&holder(
            &[
                "gen",
                "weierstrass",
                "--a",
                "0.6",
                "--b",
                "2",
                "--n",
                "2^11",
                "--out",
                "w.f64"
            ],
            &dir
        )),
        0
    );
    let a = holder(&["analyze", "w.f64"], &dir);
    let b = holder(&["analyze", "w.f64"], &dir);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_rejects_garbage_with_exit_2() {
    let dir = workdir("an-bad");
    fs::write(dir.join("bad.csv"), "x,value\n0.0,1.0\nnot,numbers\n").unwrap();
    let out = holder(&["analyze", "bad.csv"], &dir);
    assert_eq!(code(&out), 2);
    // missing file
    let out = holder(&["analyze", "missing.f64"], &dir);
    assert_eq!(code(&out), 2);
}

#[test]
fn criterion_subcommand_dumps_trace() {
    let dir = workdir("crit");
    assert_eq!(
        code(&holder(
            &[
                "gen",
                "gap-pyramid",
                "--alpha",
                "0.5",
                "--pattern",
                "all-alive",
                "--jmax",
                "12",
                "--out",
                "p.json"
            ],
            &dir
        )),
        0
    );
    let out = holder(&["criterion", "p.json", "--M", "1"], &dir);
    assert_eq!(code(&out), 0);
    let trace: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = trace["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    // exact power law: criterion(j) = 2^{-j/2}
    let v = rows[6]["value"].as_f64().unwrap();
    assert!((v - (2f64).powf(-3.0)).abs() < 1e-12);
}

#[test]
fn verify_runs_and_unknown_suite_exits_2() {
    let dir = workdir("verify");
    let out = holder(&["verify", "theta"], &dir);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite theta: PASS"), "{text}");

    let out = holder(&["verify", "no-such-suite"], &dir);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_json_format_is_machine_readable() {
    let dir = workdir("verify-json");
    let out = holder(&["verify", "meyer", "--format", "json"], &dir);
    assert_eq!(code(&out), 0);
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["suite"], "meyer");
    assert_eq!(rep["passed"], true);
}

#[test]
fn csv_signal_round_trip_through_analyze() {
    let dir = workdir("csv");
    let mut text = String::from("x,value\n");
    for i in 0..256 {
        let x = i as f64 / 256.0;
        text.push_str(&format!("{x},{}\n", (20.0 * x).sin()));
    }
    fs::write(dir.join("s.csv"), text).unwrap();
    let out = holder(&["analyze", "s.csv"], &dir);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["input"]["length"], 256);
}

#[test]
fn thread_cap_is_respected() {
    let dir = workdir("threads");
    assert_eq!(
        code(&holder(
            &[
                "gen",
                "weierstrass",
                "--a",
                "0.6",
                "--b",
                "2",
                "--n",
                "2^11",
                "--out",
                "w.f64"
            ],
            &dir
        )),
        0
    );
    let out = Command::new(env!("CARGO_BIN_EXE_holder"))
        .args(["analyze", "w.f64"])
        .env("HOLDER_THREADS", "1")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let single: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let multi = holder(&["analyze", "w.f64"], &dir);
    let multi: serde_json::Value = serde_json::from_slice(&multi.stdout).unwrap();
    // worker count cannot change any reported number
    assert_eq!(single, multi);
}
