use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_massey-lab"));
    c.env_remove("MASSEY_LAB_CACHE");
    c
}

fn here() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).current_dir(here()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["type"] == "record")
        .collect()
}

#[test]
fn group_list_has_the_fixtures() {
    let o = run(&["group", "list", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = records(&o)
        .iter()
        .map(|r| r["item"].as_str().unwrap().to_string())
        .collect();
    for want in ["Z2", "Z4", "V4", "D4", "Q8", "U3(2)", "SD(2,1,3)"] {
        assert!(
            names.iter().any(|n| n == want),
            "{want} missing from {names:?}"
        );
    }
}

#[test]
fn group_show_z2() {
    let o = run(&["group", "show", "Z2", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["details"]["order"], 2);
}

#[test]
fn group_check_reports_parse_errors_and_bad_tables() {
    let dir = tempfile::tempdir().unwrap();
    let unparsable = dir.path().join("bad.tbl");
    std::fs::write(&unparsable, "order 2\ngenerators 1\n0 1\n1 x\n").unwrap();
    let o = run(&["group", "check", unparsable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4, column 3"));

    // Z/3 with one entry mutated: no longer a group
    let mutated = dir.path().join("mutated.tbl");
    std::fs::write(&mutated, "order 3\ngenerators 1\n0 1 2\n1 2 0\n2 0 0\n").unwrap();
    let o = run(&[
        "group",
        "check",
        mutated.to_str().unwrap(),
        "--format",
        "records",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(records(&o)[0]["verdict"]["status"], "fails");

    let good = dir.path().join("z3.tbl");
    std::fs::write(&good, "order 3\ngenerators 1\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    assert_eq!(
        run(&["group", "check", good.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn cohomology_of_small_cyclic_groups() {
    let o = run(&[
        "cohomology",
        "--group",
        "Z2",
        "--p",
        "2",
        "--no-cache",
        "--format",
        "records",
    ]);
    let d = &records(&o)[0]["details"];
    assert_eq!(
        (d["dim_h1"].as_u64(), d["dim_h2"].as_u64()),
        (Some(1), Some(1))
    );
    assert_eq!(d["demushkin"], true);
    let o = run(&[
        "cohomology",
        "--group",
        "Z3",
        "--p",
        "2",
        "--no-cache",
        "--format",
        "records",
    ]);
    let d = &records(&o)[0]["details"];
    assert_eq!(
        (d["dim_h1"].as_u64(), d["dim_h2"].as_u64()),
        (Some(0), Some(0))
    );
    assert_eq!(d["demushkin"], false);
}

#[test]
fn verify_case_by_case_matches_golden() {
    let o = run(&["verify", "case-by-case", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let golden =
        std::fs::read_to_string(here().join("golden/verify_case_by_case.records")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn verify_dwyer_on_v4_agrees() {
    let o = run(&[
        "verify",
        "dwyer",
        "--group",
        "V4",
        "--p",
        "2",
        "--n",
        "3",
        "--no-cache",
        "--format",
        "records",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o).len(), 64);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "verify",
        "twisting",
        "--group",
        "Z4",
        "--p",
        "2",
        "--n",
        "3",
        "--no-cache",
        "--format",
        "records",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parallel_runs_give_the_same_records() {
    let base = [
        "verify",
        "remark",
        "--group",
        "V4",
        "--p",
        "2",
        "--n",
        "3",
        "--no-cache",
        "--format",
        "records",
    ];
    let one = run(&base);
    let mut par: Vec<&str> = base.to_vec();
    par.extend(["--jobs", "4"]);
    let four = run(&par);
    assert_eq!(records(&one), records(&four));
}

#[test]
fn cache_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify", "dwyer", "--group", "Z4", "--p", "2", "--n", "3", "--format", "records",
    ];
    let plain = bin().args(args).arg("--no-cache").output().unwrap();
    let cold = bin()
        .args(args)
        .env("MASSEY_LAB_CACHE", dir.path())
        .output()
        .unwrap();
    let warm = bin()
        .args(args)
        .env("MASSEY_LAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(
        std::fs::read_dir(dir.path()).unwrap().next().is_some(),
        "cache stayed empty"
    );
    // the header echoes the arguments, so only the plain run differs there
    assert_eq!(records(&plain), records(&cold));
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&[
            "verify",
            "dwyer",
            "--group",
            "V4",
            "--p",
            "2",
            "--n",
            "3",
            "--budget",
            "1",
            "--no-cache"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(3));
    assert_eq!(
        run(&["--jobs", "0", "group", "list"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn massey_query_file() {
    let o = run(&["massey", "data/v4_triple.query", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0]["details"];
    // a_1 ∪ a_2 ≠ 0 for independent classes of V4
    assert_eq!(r["defined"], false);
    assert_eq!(r["vanishes"], false);
}

#[test]
fn solve_problem_files() {
    let o = run(&["solve", "data/z2_in_z4.problem", "--format", "records"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(records(&o)[0]["verdict"]["witness"]["exhausted_nodes"].is_u64());
    let o = run(&["solve", "data/z4_in_z4.problem", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["details"]["witness"], serde_json::json!([1]));
}

#[test]
fn matrix_order() {
    let o = run(&[
        "matrix",
        "3 2 / 1 1 1 / 0 1 1 / 0 0 1",
        "--format",
        "records",
    ]);
    assert_eq!(records(&o)[0]["details"]["order"], 4);
}
