use std::process::{Command, Output};

fn qdisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdisk"))
        .args(args)
        .env("QDISK_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lincoef_json_has_nine_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let o = qdisk(&[
        "lincoef",
        "--alpha",
        "1",
        "--max-deg",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let table = qdisk_core::LinTable::<qdisk_core::Scalar>::from_json(&v).unwrap();
    assert_eq!(table.rows().len(), 9);
    assert!(table.non_stochastic_rows().is_empty());
    // (1,0;1,0): R_{1,0} R_{0,1} = z z*
    let row: Vec<_> = table.rows()[&(1, 0, 1, 0)]
        .iter()
        .map(|(i, _)| (i.lpp, i.mpp))
        .collect();
    assert_eq!(row, vec![(0, 0), (1, 1)]);
}

#[test]
fn lincoef_degree_zero_and_float() {
    let o = qdisk(&["lincoef", "--alpha", "1", "--max-deg", "0", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(0,0;0,0;0,0)  1"));

    let o = qdisk(&[
        "lincoef",
        "--alpha",
        "0.5",
        "--q",
        "0.5",
        "--max-deg",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let table = qdisk_core::LinTable::<f64>::read_csv(
        o.stdout.as_slice(),
        qdisk_core::AlphaParam::Float(0.5),
        qdisk_core::QLabel::Value(0.5),
    )
    .unwrap();
    assert_eq!(table.rows().len(), 9);
    assert!(table.non_stochastic_rows().is_empty());
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "hypergroup", "--alpha", "1", "--max-deg", "2"][..],
        &["verify", "addition", "--alpha", "1", "--l", "1", "--m", "1"],
        &["verify", "sos", "--alpha", "1", "--max-deg", "1"],
        &["verify", "orthogonality", "--alpha", "2", "--max-deg", "2"],
        &[
            "verify", "addition", "--alpha", "1.5", "--q", "0.5", "--l", "2", "--m", "1", "--lp", "1", "--mp", "1",
        ],
    ] {
        let o = qdisk(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("all checks passed"));
    }
}

#[test]
fn verify_json_report_has_timings() {
    let o = qdisk(&[
        "verify",
        "hypergroup",
        "--alpha",
        "2",
        "--max-deg",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["seconds"].as_f64().is_some());
    }
}

#[test]
fn walk_outputs() {
    let o = qdisk(&["walk", "--alpha", "1", "--q", "0.5", "--l", "1", "--m", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let measures = v["measures"].as_array().unwrap();
    assert_eq!(measures.len(), 1);
    let mu = qdisk_core::Measure::<f64>::from_json(&measures[0]).unwrap();
    assert_eq!(mu.masses.len(), 1);
    assert_eq!(mu.mass(qdisk_core::Point::new(1, 0)), 1.0);

    let o = qdisk(&[
        "walk", "--alpha", "1", "--q", "0.5", "--l", "1", "--m", "0", "--steps", "3",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let last = qdisk_core::Measure::<f64>::from_json(&v["measures"][2]).unwrap();
    assert!((last.mass(qdisk_core::Point::new(3, 0)) - 1.0).abs() < 1e-12);

    let o = qdisk(&[
        "walk", "--alpha", "2", "--q", "0.3", "--l", "1", "--m", "1", "--lp", "0", "--mp", "1", "--steps", "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for m in v["measures"].as_array().unwrap() {
        let mu = qdisk_core::Measure::<f64>::from_json(m).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["lincoef", "--alpha", "1.5"][..],
        &["verify", "nothing"],
        &["walk", "--alpha", "1", "--l", "1", "--m", "0"],
        &["walk", "--alpha", "1", "--q", "0.5"],
        &["lincoef", "--q", "1.5"],
        &["verify", "addition", "--alpha", "0"],
        &["verify", "addition", "--l", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(qdisk(args).status.code(), Some(1), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_qdisk"))
        .args(["lincoef", "--max-deg", "0"])
        .env("QDISK_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
