use knotlg::verify::{self, CheckKind, CheckOptions, Status, VerifyError, TABLE_HEADER};

fn header() -> String {
    TABLE_HEADER.join(",")
}

#[test]
fn golden_table_has_no_hard_failures() {
    let report = verify::run_records(&verify::golden_records(), &CheckOptions::default());
    for r in &report.records {
        assert_eq!(r.hard_failures(), 0, "{}: {:?} {:?}", r.name, r.error, r.checks);
    }
    let by_name = |n: &str| report.records.iter().find(|r| r.name == n).unwrap();
    let wh = by_name("whitehead-double-trefoil");
    assert_eq!(wh.status(CheckKind::Golden), Some(Status::Pass));
    assert_eq!(wh.status(CheckKind::GenusBound), Some(Status::Equality));
    assert_eq!(wh.span, Some(4));
    let five2 = by_name("5_2");
    assert_eq!(five2.status(CheckKind::CrossOracle), Some(Status::Pass));
    assert_eq!(five2.lg_monic, Some(false));
    assert_eq!(five2.status(CheckKind::FiberedMonic), Some(Status::Pass));
    let trefoil = by_name("trefoil");
    assert_eq!(trefoil.lg_monic, Some(true));
    assert_eq!(trefoil.breadth, Some(2));
    assert_eq!(trefoil.status(CheckKind::AlternatingEquality), Some(Status::Equality));
    assert_eq!(report.conjecture_form, verify::CONJECTURE_FORM);
}

#[test]
fn mismatching_expected_lg_is_a_hard_failure() {
    let text = format!("{}\ntrefoil,braid:2: 1 1 1,1,1,true,true,,1 + t0\n", header());
    let records = verify::parse_table(&text).unwrap();
    let report = verify::run_records(&records, &CheckOptions::default());
    assert!(report.has_hard_failures());
    assert_eq!(report.records[0].status(CheckKind::Golden), Some(Status::Fail));
}

#[test]
fn strict_inequality_is_data_not_failure() {
    // genus deliberately too large for the figure-eight: strict, reported only
    let text = format!("{}\nloose,braid:3: 1 -2 1 -2,2,1,,,,\n", header());
    let report = verify::run_records(&verify::parse_table(&text).unwrap(), &CheckOptions::default());
    let r = &report.records[0];
    assert_eq!(r.status(CheckKind::GenusBound), Some(Status::Strict));
    assert!(!report.has_hard_failures());
}

#[test]
fn unsupported_family_counts_as_error() {
    let text = format!("{}\n\"neg\",\"pretzel:2,-1,-5\",,1,,,,\n", header());
    let report = verify::run_records(&verify::parse_table(&text).unwrap(), &CheckOptions::default());
    assert!(report.records[0].error.is_some());
    assert!(report.has_hard_failures());
}

#[test]
fn empty_table_and_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("empty.csv");
    std::fs::write(&table, format!("{}\n", header())).unwrap();
    let out = dir.path().join("report.json");
    let report = verify::run_table(&table, &CheckOptions::default(), Some(&out)).unwrap();
    assert!(report.records.is_empty());
    assert!(!report.has_hard_failures());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, report.to_json() + "\n");

    let missing = verify::run_table(&dir.path().join("nope.csv"), &CheckOptions::default(), None);
    assert!(matches!(missing, Err(VerifyError::Io { .. })));
}

#[test]
fn parse_errors_name_row_and_column() {
    let text = format!("{}\nok,braid:2: 1,0,1,,,,\nbad,braid:2: 1,0,1,,,,t0^\n", header());
    match verify::parse_table(&text) {
        Err(VerifyError::Parse { row, column, .. }) => {
            assert_eq!(row, 3);
            assert_eq!(column, "expected_lg");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reports_are_deterministic() {
    let records: Vec<_> = verify::golden_records().into_iter().filter(|r| r.name != "whitehead-double-trefoil").collect();
    let opts = CheckOptions::default();
    let a = verify::run_records(&records, &opts).to_json();
    let b = verify::run_records(&records, &opts).to_json();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| verify::run_records(&records, &opts).to_json());
    assert_eq!(a, c);
}

#[test]
fn check_subset_runs_only_requested() {
    let opts = CheckOptions { checks: vec![CheckKind::GenusBound], ..CheckOptions::default() };
    let text = format!("{}\ntrefoil,braid:2: 1 1 1,1,1,,,,\n", header());
    let report = verify::run_records(&verify::parse_table(&text).unwrap(), &opts);
    let checks: Vec<_> = report.records[0].checks.iter().map(|c| c.check).collect();
    assert_eq!(checks, vec![CheckKind::GenusBound]);
    assert_eq!(report.summary.by_check["genus_bound"]["equality"], 1);
}
