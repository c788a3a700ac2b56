//! Drives the `gausscap` binary as a subprocess.

use std::process::{Command, Output};

use gaussian_capacity::report::{CompileReport, RateReport, SweepRow, ThresholdReport};

fn gausscap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gausscap"))
        .args(args)
        .env_remove("GAUSSCAP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rate_json_matches_schema_and_identity() {
    let o = gausscap(&[
        "rate",
        "--eta",
        "0.81",
        "--nth",
        "1",
        "--nbar",
        "1",
        "--check-mn",
        "1,4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: RateReport = serde_json::from_str(&stdout(&o)).unwrap();
    let check = r.check.expect("identity check requested");
    assert_eq!((check.m, check.n), (1, 4));
    assert!(check.abs_diff <= 1e-9 && check.passed);
    assert!(r.big_f > r.f);
    assert!(r.x_star.unwrap() < 1.0);

    // every documented field, nothing else
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["F", "F_raw", "check", "eta", "f", "f_raw", "n_bar", "n_th", "source", "x_star"]
    );
}

#[test]
fn gamma_flag_is_complement_of_eta() {
    let a = gausscap(&["rate", "--gamma", "0.19", "--nbar", "1"]);
    let b = gausscap(&["rate", "--eta", "0.81", "--nbar", "1"]);
    let ra: RateReport = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: RateReport = serde_json::from_str(&stdout(&b)).unwrap();
    assert!((ra.big_f - rb.big_f).abs() < 1e-12);
    assert_eq!(
        gausscap(&["rate", "--gamma", "0.2", "--eta", "0.8"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_gamma_csv_is_deterministic() {
    let args = ["sweep-gamma", "--grid", "0:0.5:11"];
    let a = gausscap(&args);
    let b = gausscap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,f,F,x_star,source,f_raw,F_raw"));
    assert_eq!(lines.count(), 11);
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_gamma_rows_match_documented_points() {
    let o = gausscap(&["sweep-gamma", "--grid", "0.1:0.3:3", "--format", "json"]);
    let rows: Vec<SweepRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 3);
    // gamma = 0.1: single-mode input is optimal
    assert!((rows[0].big_f - rows[0].f).abs() < 1e-12 && rows[0].x_star == 1.0);
    // gamma = 0.3: past the crossover
    assert!(rows[2].big_f_raw > rows[2].f_raw && rows[2].x_star < 1.0);
}

#[test]
fn sweep_nbar_brackets_crossover() {
    let o = gausscap(&[
        "sweep-nbar",
        "--eta",
        "0.81",
        "--grid",
        "1:5:2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<SweepRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rows[0].big_f > rows[0].f);
    assert!((rows[1].big_f - rows[1].f).abs() <= 1e-9);
}

#[test]
fn thresholds_report() {
    let o = gausscap(&["thresholds", "--eta", "0.81", "--nth", "1", "--nbar", "1"]);
    let r: ThresholdReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r.gamma_star.unwrap() - 0.1775).abs() <= 5e-4);
    assert!((r.n_bar_star.unwrap() - 2.458).abs() <= 5e-3);

    let o = gausscap(&["thresholds", "--eta", "1", "--nth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["n_bar_star"].is_null());
}

#[test]
fn compile_writes_circuit_and_metrics() {
    let dir = std::env::temp_dir().join(format!("gausscap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gft2.txt");
    let o = gausscap(&["compile", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: CompileReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r.operation_count, r.gate_count, r.depth), (2, 2, 2));
    assert!(r.max_deviation < 1e-12);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# width 2"));

    let o = gausscap(&["compile", "32"]);
    let r: CompileReport = serde_json::from_str(&String::from_utf8(o.stderr).unwrap()).unwrap();
    assert!(r.gate_count <= 640 && r.depth <= 100 && r.max_deviation < 1e-9);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn out_dir_from_environment() {
    let dir = std::env::temp_dir().join(format!("gausscap-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gausscap"))
        .args(["sweep-gamma", "--grid", "0:0.2:3"])
        .env("GAUSSCAP_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.join("sweep_gamma.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(gausscap(&["compile", "3"]).status.code(), Some(2));
    assert!(String::from_utf8(gausscap(&["compile", "3"]).stderr)
        .unwrap()
        .contains("power-of-two"));
    assert_eq!(
        gausscap(&["sweep-gamma", "--grid", "0:1:5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gausscap(&["sweep-gamma", "--grid", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gausscap(&["rate", "--eta", "0.5", "--check-mn", "3,2"])
            .status
            .code(),
        Some(2)
    );
    let missing = std::env::temp_dir()
        .join("gausscap-no-such-dir")
        .join("x.csv");
    let o = gausscap(&[
        "sweep-gamma",
        "--grid",
        "0:0.2:3",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(gausscap(&["selfcheck"]).status.code(), Some(0));
}
