use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn knotlg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotlg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const HEADER: &str = "name,presentation,genus,components,alternating,fibered,expected_alexander,expected_lg";

#[test]
fn lg_trefoil_and_unknot() {
    let o = knotlg(&["lg", "2: 1 1 1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("LG = t1^2 - t1 - t0*t1^2 + 1 + 2*t0*t1 - t0 - t0^2*t1 + t0^2"), "{out}");
    assert!(out.contains("span = 4"));
    let o = knotlg(&["--format", "json", "lg", "1:"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lg"], "1");
    assert_eq!(v["span"], 0);
}

#[test]
fn lg_evaluations_flag() {
    let o = knotlg(&["--format", "json", "lg", "--evaluations", "3: 1 -2 1 -2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["alexander"]["poly"], "-t^-1 + 3 - t");
    assert_eq!(v["evaluation_check"]["holds"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(knotlg(&["lg", "2: 5"]).status.code(), Some(2));
    assert_eq!(knotlg(&["lg", "nonsense"]).status.code(), Some(2));
    assert_eq!(knotlg(&["family", "pretzel:2,-1,-5"]).status.code(), Some(4));
    assert_eq!(knotlg(&["family", "torus:2,3"]).status.code(), Some(2));
    assert_eq!(knotlg(&["lg", "12:"]).status.code(), Some(4));
    assert_eq!(knotlg(&["check", "/no/such/table.csv"]).status.code(), Some(2));
}

#[test]
fn family_output() {
    let o = knotlg(&["family", "twist:0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("LG = 1\n"));
    let o = knotlg(&["--format", "json", "family", "2bridge:2,3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["span"], 4);
    assert_eq!(v["genus"]["g"], 1);
    assert_eq!(v["genus"]["mu"], 1);
}

#[test]
fn span_accepts_braids_and_families() {
    assert_eq!(stdout(&knotlg(&["span", "3: 1 -2 1 -2"])), "4\n");
    assert_eq!(stdout(&knotlg(&["span", "braid:2: 1 1 1"])), "4\n");
    assert_eq!(stdout(&knotlg(&["span", "pretzel:2,-1,7"])), "8\n");
    assert_eq!(stdout(&knotlg(&["span", "3: 1"])), "undefined (zero polynomial)\n");
}

#[test]
fn alexander_command() {
    let o = knotlg(&["alexander", "2: 1 1 1 1 1"]);
    assert_eq!(stdout(&o), "Alexander = t^-2 - t^-1 + 1 - t + t^2\n");
}

#[test]
fn selftest_passes_and_rejects_corrupted_table() {
    let o = knotlg(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = knotlg(&["--format", "json", "selftest"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let names: Vec<_> = v["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap().to_string()).collect();
    for want in ["inverse", "yang_baxter", "cubic_skein", "markov", "coefficient_recurrence"] {
        assert!(names.iter().any(|n| n == want), "{names:?}");
    }

    let bad = fixture("corrupted_rmatrix.txt");
    let o = knotlg(&["selftest", "--rmatrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("FAIL inverse"), "{}", stdout(&o));
}

#[test]
fn check_exit_status_follows_hard_failures() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    std::fs::write(&good, format!("{HEADER}\ntrefoil,\"braid:2: 1 1 1; twist:1\",1,1,true,true,t^-1 - 1 + t,\n")).unwrap();
    let out = dir.path().join("report.json");
    let o = knotlg(&["check", good.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["summary"]["hard_failures"], 0);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, format!("{HEADER}\ntrefoil,braid:2: 1 1 1,1,1,,,,t0 + t1\n")).unwrap();
    assert_eq!(knotlg(&["check", bad.to_str().unwrap()]).status.code(), Some(1));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(knotlg(&["check", empty.to_str().unwrap()]).status.code(), Some(0));

    let broken = dir.path().join("broken.csv");
    std::fs::write(&broken, format!("{HEADER}\nx,braid:2: 9,,1,,,,\n")).unwrap();
    let o = knotlg(&["check", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));
}

#[test]
fn bundled_golden_table_passes() {
    let o = knotlg(&["check", "--golden"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.csv");
    std::fs::write(
        &table,
        format!("{HEADER}\ntrefoil,braid:2: 1 1 1,1,1,true,true,,\nfig8,\"braid:3: 1 -2 1 -2; 2bridge:1,1\",1,1,true,true,,\n5_2,twist:2,,1,true,false,,\n"),
    )
    .unwrap();
    let t = table.to_str().unwrap();
    let runs: Vec<Vec<u8>> = [
        vec!["--format", "json", "--workers", "1", "check", t],
        vec!["--format", "json", "--workers", "3", "check", t],
        vec!["--format", "json", "check", t],
    ]
    .iter()
    .map(|a| knotlg(a).stdout)
    .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);

    let a = knotlg(&["--format", "json", "--workers", "1", "lg", "4: 1 -2 3 -2 1 3"]).stdout;
    let b = knotlg(&["--format", "json", "--workers", "4", "lg", "4: 1 -2 3 -2 1 3"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn verify_scalar_flag() {
    let o = knotlg(&["--verify-scalar", "lg", "3: 1 1 2 -1"]);
    assert_eq!(o.status.code(), Some(0));
}
