//! End-to-end tests of the binary: flag handling, output formats, exit
//! codes, and byte determinism across worker counts.

use std::process::{Command, Output};

fn uvbkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uvbkit"))
        .args(args)
        .env_remove("UVBKIT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn reduce_example() {
    let out = uvbkit(&["reduce", "--n", "3", "s1 r1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "lam: l1,2^-1\nperm: [1,2,3]\n");
}

#[test]
fn eq_example() {
    let out = uvbkit(&["eq", "--n", "4", "r1 s1^-1", "l1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "EQUAL\n");
    let out = uvbkit(&["eq", "--n", "4", "s1", "r1"]);
    assert_eq!(stdout(&out), "NOT-EQUAL\n");
}

#[test]
fn act_and_expand_examples() {
    let out = uvbkit(&["act", "--n", "3", "--perm", "(2 3)", "l1,2"]);
    assert_eq!(stdout(&out), "l1,3\n");
    let out = uvbkit(&["expand", "--n", "3", "l1,3"]);
    assert_eq!(stdout(&out), "r2 r1 s1^-1 r2\n");
    // Round trip through reduce.
    let out = uvbkit(&["eq", "--n", "3", "r2 r1 s1^-1 r2", "l1,3"]);
    assert_eq!(stdout(&out), "EQUAL\n");
}

#[test]
fn abelianize_example() {
    let out = uvbkit(&["abelianize", "--n", "3", "r1"]);
    assert_eq!(stdout(&out), "sigma_degree: 0\nrho_parity: 1\npure_vector: -\n");
    let out = uvbkit(&["abelianize", "--n", "3", "l1,3^2 l3,1^-1"]);
    assert!(stdout(&out).contains("pure_vector: l1,3=2 l3,1=-1"));
}

#[test]
fn error_paths_are_machine_parsable() {
    let out = uvbkit(&["reduce", "--n", "3", "l1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EPARSE]:"), "{}", stderr(&out));

    let out = uvbkit(&["reduce", "--n", "3", "s9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EPARSE]:"));

    let out = uvbkit(&["reduce", "--n", "1", "s1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EDOMAIN]:"));

    let out = uvbkit(&["census", "--presentation", "uvb", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--target"));

    let out = uvbkit(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EUSAGE]:"));
}

#[test]
fn verify_relations_all_ok() {
    let out = uvbkit(&["verify", "relations", "--n", "5", "--presentation", "uvb"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("R9_3 OK"));
    assert!(text.lines().last().unwrap().starts_with("summary ok="));
    assert!(text.contains("fail=0"));
}

#[test]
fn verify_relations_wb_is_three_valued() {
    let out = uvbkit(&["verify", "relations", "--n", "4", "--presentation", "wb"]);
    assert_eq!(out.status.code(), Some(0), "UNKNOWN is allowed, not a failure");
    let text = stdout(&out);
    assert!(text.contains("R5_1 OK"));
    assert!(text.contains("UNKNOWN"));
    // The normal-form engine refuses WB.
    let out = uvbkit(&[
        "verify",
        "relations",
        "--n",
        "4",
        "--presentation",
        "wb",
        "--engine",
        "normal-form",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_gamma_outer_and_hbar() {
    let out = uvbkit(&["verify", "gamma-outer", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("gamma_not_inner ProvenNotInner(PAIR_SWAP)"));
    assert!(text.contains("beta_not_inner ProvenNotInner(ABELIANIZATION)"));

    let out = uvbkit(&["verify", "hbar", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("injective: true"));
    assert!(text.contains("surjective: false"));
}

#[test]
fn verify_tss_flags_with_exit_2() {
    let out = uvbkit(&["verify", "tss", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2), "flagged finding surfaces as exit 2");
    let text = stdout(&out);
    assert!(text.contains("commuting=true"));
    assert!(text.contains("full_symmetry=false"));
    assert!(text.contains("FLAGGED"));
    assert!(text.contains("union_covers_all_pairs: true"));
}

#[test]
fn verify_autos_suite() {
    let out = uvbkit(&["verify", "autos", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("identity[ETE=T] OK"));
    assert!(text.contains("identity[PEP=E] OK"));
    assert!(text.contains("fail=0"));
}

#[test]
fn census_json_schema_and_exit() {
    let out = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "2",
        "--target",
        "s2",
        "--dedup",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["meta"]["hom_count"], 4);
    assert_eq!(v["meta"]["presentation"], "uvb");
    assert_eq!(v["classes"].as_array().unwrap().len(), 4);
    assert!(v["meta"].get("wall_time_ms").is_none(), "timings are opt-in");

    // Theorem-a classification at n=3 finds OTHER homs (open in the small
    // cases), which must surface as exit code 2.
    let out = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "3",
        "--target",
        "s3",
        "--dedup",
        "--classify",
        "theorem-a",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("bucket=OTHER"));
}

#[test]
fn census_report_file_matches_json_stdout() {
    let dir = std::env::temp_dir().join("uvbkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "2",
        "--target",
        "s2",
        "--dedup",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout(&out));
}

#[test]
fn census_target_file_round_trip() {
    let dir = std::env::temp_dir().join("uvbkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z6.table");
    // Z_6 as a table file: line 1 is N, identity must be id 0.
    let mut body = String::from("6\n");
    for a in 0..6 {
        let row: Vec<String> = (0..6).map(|b| ((a + b) % 6).to_string()).collect();
        body.push_str(&row.join(" "));
        body.push('\n');
    }
    std::fs::write(&path, body).unwrap();
    let from_file = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "3",
        "--target-file",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["meta"]["hom_count"], 12);

    // A broken table is rejected.
    let bad = dir.join("bad.table");
    std::fs::write(&bad, "2\n0 1\n1 1\n").unwrap();
    let out = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "3",
        "--target-file",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn census_product_target() {
    // UVB_2 → Z_2 × Z_2: ρ image must square to 0 (all four elements work,
    // exponent 2 group), σ image free: 16 homs.
    let out = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "2",
        "--target",
        "z2xz2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["meta"]["hom_count"], 16);
}

#[test]
fn aut_apply_spec_file() {
    let dir = std::env::temp_dir().join("uvbkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gamma.json");
    std::fs::write(
        &path,
        r#"{"target":"uvb","n":3,"images":{"s1":"r1 s1 r1","s2":"r2 s2 r2"}}"#,
    )
    .unwrap();
    let out = uvbkit(&[
        "aut",
        "apply",
        "--spec",
        path.to_str().unwrap(),
        "--elem",
        "l1,2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // γ sends λ_{1,2} to λ_{2,1}.
    assert_eq!(stdout(&out), "lam: l2,1\nperm: [1,2,3]\nin_kernel: true\n");
}

#[test]
fn s6_outer_reports_verified_witness() {
    let out = uvbkit(&["s6-outer"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("image_order: 720"));
    assert!(text.contains("verified: true"));
}

#[test]
fn byte_identical_across_worker_counts() {
    let runs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let out = uvbkit(&[
                "census",
                "--presentation",
                "uvb",
                "--n",
                "3",
                "--target",
                "s3",
                "--dedup",
                "--classify",
                "theorem-a",
                "--format",
                "json",
                "--workers",
                w,
            ]);
            assert_eq!(out.status.code(), Some(2));
            stdout(&out)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);

    let runs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let out = uvbkit(&["verify", "relations", "--n", "5", "--workers", w]);
            assert_eq!(out.status.code(), Some(0));
            stdout(&out)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);

    let runs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let out = uvbkit(&[
                "verify",
                "theorem-a",
                "--n",
                "5",
                "--format",
                "json",
                "--workers",
                w,
            ]);
            assert_eq!(out.status.code(), Some(0));
            stdout(&out)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn gamma_outer_rejects_n2() {
    let out = uvbkit(&["verify", "gamma-outer", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EDOMAIN]:"));
}

#[test]
fn suites_are_run_to_run_deterministic() {
    for args in [
        vec!["verify", "autos", "--n", "4", "--format", "json"],
        vec!["verify", "hbar", "--n", "4", "--format", "json"],
        vec!["verify", "gamma-outer", "--n", "3", "--format", "json"],
        vec!["tss", "--n", "4", "--format", "json"],
        vec!["s6-outer", "--format", "json"],
    ] {
        let first = uvbkit(&args);
        let second = uvbkit(&args);
        assert_eq!(stdout(&first), stdout(&second), "{args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn budget_env_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_uvbkit"))
        .args(["census", "--presentation", "uvb", "--n", "3", "--target", "s3"])
        .env("UVBKIT_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EBUDGET]:"));

    let out = uvbkit(&[
        "census",
        "--presentation",
        "uvb",
        "--n",
        "3",
        "--target",
        "s3",
        "--budget",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[EBUDGET]:"));
}
