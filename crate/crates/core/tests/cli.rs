use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lpbm::cli::schema;

fn bodies() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bodies")
}

fn body(name: &str) -> String {
    bodies().join(name).to_string_lossy().into_owned()
}

fn lpbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpbm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, k: usize) -> f64 {
    line.split(',').nth(k).unwrap().parse().unwrap()
}

#[test]
fn schemas_are_frozen() {
    let got: Vec<(String, &str)> = schema::ALL.iter().map(|s| (s.tag(), s.header)).collect();
    let want = vec![
        ("volumes/1".to_string(), "body,j,value,method,error"),
        ("lp-sum/1".to_string(), "x,y,z,h_left,h_right,p_mean,h_combination"),
        ("check-lpbm/1".to_string(), "n,j,p,lambda,lhs,rhs_geo,rhs_p,margin_geo,margin_p,strict_violation"),
        ("counterexample/1".to_string(), "s,lhs,rhs,margin,strict_violation"),
        ("spectrum/1".to_string(), "kind,index,value"),
        ("second-derivative/1".to_string(), "p,sample,finite_difference,spectral,discrepancy"),
        ("solve-cm/1".to_string(), "iteration,residual,step,min_radius,reference_operator"),
        ("ivaki-milman/1".to_string(), "p,c,lhs,rhs,holds"),
        ("steiner-check/1".to_string(), "rho,parallel_volume,steiner_polynomial,relative_gap"),
    ];
    assert_eq!(got, want);
}

#[test]
fn cube_volumes() {
    let o = lpbm(&["volumes", "--body", &body("cube2.json")]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(schema::VOLUMES.header));
    let values: Vec<f64> = lines.map(|l| field(l, 2)).collect();
    assert_eq!(values, vec![6.0, 12.0, 8.0]);
}

#[test]
fn ball_spectrum_row() {
    let o = lpbm(&["spectrum", "--body", &body("unit_ball.json"), "--j", "2", "--degree", "8", "--resolution", "16"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(schema::SPECTRUM.header));
    assert_eq!(text.lines().filter(|l| l.starts_with("eigenvalue,")).count(), 10);
    let row = text.lines().find(|l| l.starts_with("lambda_1e,")).unwrap();
    assert!((field(row, 2) - 3.0).abs() < 1e-8, "{row}");
}

#[test]
fn counterexample_has_a_violation() {
    let o = lpbm(&["counterexample", "--p", "0.5", "--lambda", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(schema::COUNTEREXAMPLE.header));
    assert!(text.lines().skip(1).any(|l| l.ends_with(",true") && field(l, 3) > 0.0));
}

#[test]
fn every_table_starts_with_its_header() {
    let ball = body("unit_ball.json");
    let ell = body("ellipsoid.json");
    let cases: Vec<(schema::Schema, Vec<&str>)> = vec![
        (schema::LP_SUM, vec!["lp-sum", "--left", &ball, "--right", &ell, "--p", "0.5", "--lambda", "0.5"]),
        (schema::CHECK_LPBM, vec!["check-lpbm", "--left", &ball, "--right", &ell, "--j", "2", "--p", "0.5", "--lambda", "0.5"]),
        (schema::SECOND_DERIVATIVE, vec!["second-derivative", "--body", &ell, "--p", "0.5", "--samples", "2"]),
        (schema::SOLVE_CM, vec!["solve-cm", "--p", "0.5", "--resolution", "12", "--degree", "8", "--probes", "0"]),
        (schema::IVAKI_MILMAN, vec!["ivaki-milman", "--body", &ell, "--resolution", "12"]),
        (schema::STEINER_CHECK, vec!["steiner-check", "--body", &ell, "--resolution", "12"]),
    ];
    for (s, args) in cases {
        let o = lpbm(&args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).lines().next(), Some(s.header), "{args:?}");
    }
}

#[test]
fn outputs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let out = dir.to_string_lossy().into_owned();
        let o = lpbm(&["counterexample", "--p", "0.25", "--lambda", "0.75", "--out", &out]);
        assert!(o.status.success());
        let o = lpbm(&[
            "volumes",
            "--body",
            &body("ellipsoid.json"),
            "--method",
            "monte-carlo-oracle",
            "--samples",
            "300",
            "--out",
            &dir.join("mc").to_string_lossy(),
        ]);
        assert!(o.status.success());
    }
    for name in ["results.csv", "report.txt", "plot.svg", "left.json", "right.json", "mc/results.csv", "mc/report.txt"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
    let report = std::fs::read_to_string(a.path().join("report.txt")).unwrap();
    assert!(report.starts_with("schema: counterexample/1\n"));
    assert!(std::fs::read_to_string(a.path().join("plot.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn exit_codes() {
    assert_eq!(lpbm(&["volumes", "--body", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(lpbm(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(lpbm(&["counterexample", "--p", "0.5", "--lambda", "1.5"]).status.code(), Some(2));
    // (p, j) = (0, 1) needs an explicit opt-in.
    assert_eq!(lpbm(&["solve-cm", "--p", "0", "--resolution", "8", "--degree", "4"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let o = lpbm(&[
        "solve-cm",
        "--p",
        "0.5",
        "--data",
        "quadrupole:3",
        "--resolution",
        "12",
        "--degree",
        "8",
        "--probes",
        "0",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(3));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("status: failed"), "{report}");
    assert!(dir.path().join("results.csv").exists());
    assert_eq!(lpbm(&["--help"]).status.code(), Some(0));
}

#[test]
fn unit_data_solves_to_the_ball() {
    let o = lpbm(&["solve-cm", "--p", "0.5", "--resolution", "12", "--degree", "8", "--probes", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2, "no Newton step is needed: {text}");
}
