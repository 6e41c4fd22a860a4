use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn abmv(args: &[&str]) -> Output {
    abmv_env(args, &[])
}

fn abmv_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_abmv"));
    cmd.args(args).env_remove("ABMV_NODE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn sav_winners_are_the_pairs_of_xyz() {
    let out = abmv(&["winners", "--rule", "sav", "-k", "2", &data("example1.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), ["{x,y}", "{x,z}", "{y,z}"]);
    let out = abmv(&["--json", "winners", "--rule", "sav", "-k", "2", "--algo", "exhaustive", &data("example1.json")]);
    let v = json(&out);
    assert_eq!(v["optimum"], "7/2");
    assert_eq!(v["algo"], "exhaustive");
    assert_eq!(v["committees"].as_array().unwrap().len(), 3);
}

#[test]
fn candidate_and_committee_scores() {
    let out = abmv(&["--json", "score", "--rule", "sav", &data("example1.json")]);
    let v = json(&out);
    for l in ["x", "y", "z"] {
        assert_eq!(v["scores"][l], "7/4");
    }
    assert_eq!(v["scores"]["a"], "5/3");
    let out = abmv(&["--json", "score", "--rule", "mav", "--committee", "a", &data("example2_CD.json")]);
    assert_eq!(json(&out)["score"], "2");
    let out = abmv(&["score", "--rule", "pav", &data("example1.json")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn jcc_exit_codes_follow_the_answer() {
    let out = abmv(&["jcc", "--rule", "mav", "-k", "1", "--J", "a", &data("example2_CD.json")]);
    assert_eq!(code(&out), 0);
    let out = abmv(&["jcc", "--rule", "mav", "-k", "1", "--J", "a", &data("example2_C.json")]);
    assert_eq!(code(&out), 1);
    let out =
        abmv(&["--json", "jcc", "--rule", "mav", "-k", "1", "--J", "a", "--algo", "fpt-n", &data("example2_CD.json")]);
    assert_eq!(json(&out)["algo"], "fpt-n");
    assert_eq!(json(&out)["answer"], true);
}

#[test]
fn split_manipulation_succeeds() {
    let file = data("example1_manipulation.json");
    let out = abmv(&["--json", "solve-manip", &file]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["answer"], true);
    assert_eq!(v["algo"], "sav-nsav-tables");
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    let out = abmv(&["solve-manip", "--algo", "common-ballots", &file]);
    assert_eq!(code(&out), 2);
    let out = abmv(&["solve-manip", "--algo", "common-ballots", "--rule", "av", &file]);
    assert!(matches!(code(&out), 0 | 1));
    let out = abmv(&["solve-manip", "--algo", "brute-force", &file]);
    assert_eq!(code(&out), 0);
}

#[test]
fn candidate_addition_control() {
    for file in ["example3_abccv.json", "example3_pav.json"] {
        let out = abmv(&["--json", "solve-control", &data(file)]);
        assert_eq!(code(&out), 0, "{file}");
        assert_eq!(json(&out)["witness"]["added_candidates"], serde_json::json!(["d"]));
        let out = abmv(&["solve-control", "--budget", "0", &data(file)]);
        assert_eq!(code(&out), 1, "{file}");
        let out = abmv(&["solve-control", "--algo", "brute-force", &data(file)]);
        assert_eq!(code(&out), 0, "{file}");
    }
}

#[test]
fn usage_and_validation_errors_exit_two() {
    assert_eq!(code(&abmv(&["winners", "--rule", "nope", "-k", "2", &data("example1.json")])), 2);
    assert_eq!(code(&abmv(&["winners", "--rule", "sav", &data("example1.json")])), 2);
    assert_eq!(code(&abmv(&["winners", "--rule", "sav", "-k", "2", "missing.json"])), 2);
    assert_eq!(code(&abmv(&["jcc", "--rule", "av", "-k", "1", "--J", "zz", &data("example2_CD.json")])), 2);
    assert_eq!(code(&abmv(&["solve-manip", &data("example1.json")])), 2);
    assert_eq!(code(&abmv(&["frobnicate"])), 2);
    assert_eq!(code(&abmv(&["--help"])), 0);
}

#[test]
fn node_cap_exits_three() {
    let out = abmv_env(
        &["solve-manip", "--algo", "brute-force", &data("example1_manipulation.json")],
        &[("ABMV_NODE_CAP", "1")],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "verify", "--suite", "manipulation", "--trials", "20", "--seed", "5"];
    let one = abmv(&[&args[..], &["--workers", "1"]].concat());
    let two = abmv(&[&args[..], &["--workers", "3"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    let gen = ["--json", "gen", "--kind", "ccav-sav-rx3c", "--seed", "9"];
    assert_eq!(abmv(&gen).stdout, abmv(&gen).stdout);
}

#[test]
fn reductions_suite_passes() {
    let out = abmv(&["verify", "--suite", "reductions", "--trials", "50", "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn generated_instances_solve_like_their_source() {
    let dir = std::env::temp_dir().join(format!("abmv-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let source = dir.join("source.json");
    let inst = dir.join("inst.json");
    let out = abmv(&["gen", "--kind", "ccdv-sav-rx3c", "--seed", "4", "--source-out", source.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    std::fs::write(&inst, &out.stdout).unwrap();
    let again = abmv(&["gen", "--kind", "ccdv-sav-rx3c", "--source", source.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
    let solved = abmv(&["solve-control", "--algo", "brute-force", inst.to_str().unwrap()]);
    assert!(matches!(code(&solved), 0 | 1));
    let auto = abmv(&["solve-control", inst.to_str().unwrap()]);
    assert_eq!(code(&auto), code(&solved));
    std::fs::remove_dir_all(&dir).unwrap();
}
