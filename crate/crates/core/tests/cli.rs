use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tfpe::frac_core::mittag_leffler;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn tfpe(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfpe"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, body).unwrap();
    p
}

const SMALL_ORACLE: &str = r#"
[problem]
alpha = 0.75
modes = 4
u0 = "w1"

[mesh]
intervals = 512

[run]
scheme = "both"
convergence_intervals = [64, 128, 256]
rate_orders = [1]
"#;

#[test]
fn solve_reproduces_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_ORACLE);
    let out = tfpe(&["solve"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let exact = mittag_leffler(0.75, -1.0).unwrap();
    for scheme in ["vie", "direct"] {
        let csv = fs::read_to_string(dir.path().join(format!("trajectory_{scheme}.csv"))).unwrap();
        assert!(csv.starts_with("t,d_1,d_2,d_3,d_4\n"));
        let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(last[0], 1.0);
        assert!((last[1] - exact).abs() < 1e-3, "{scheme}: {} vs {exact}", last[1]);
    }
    assert!(dir.path().join("report.txt").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_ORACLE);
    let runs = [("solve", "trajectory_vie.csv"), ("verify-estimates", "estimates_direct.csv"), ("constants", "constants.csv"), ("scan-alpha", "scan.csv"), ("rates", "rates.csv"), ("convergence", "convergence.csv")];
    for (cmd, file) in runs {
        let (a, b) = (dir.path().join(format!("{cmd}_a")), dir.path().join(format!("{cmd}_b")));
        assert_eq!(tfpe(&[cmd], &cfg, &a).status.code(), Some(0), "{cmd}");
        assert_eq!(tfpe(&[cmd], &cfg, &b).status.code(), Some(0), "{cmd}");
        let (x, y) = (fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap());
        assert!(!x.is_empty() && x == y, "{cmd}/{file}");
    }
}

#[test]
fn zero_problem_passes_every_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let out = tfpe(&["verify-estimates"], &configs().join("zero.toml"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("estimates_vie.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn failed_checks_exit_one_and_still_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL_ORACLE}min_order = 5.0\n"));
    let out = tfpe(&["convergence"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("FAIL"));
    assert!(dir.path().join("convergence.csv").exists());
}

#[test]
fn bad_configs_exit_two_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let out = tfpe(&["constants"], &configs().join("classical_half.toml"), dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/2 < alpha"));

    let cfg = write_config(dir.path(), "[problem]\nalpha = 0.7\nmodez = 3\n");
    let out = tfpe(&["solve"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modez"));

    let cfg = write_config(dir.path(), "[problem]\nalpha = 1.2\n");
    let out = tfpe(&["solve"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));

    let out = tfpe(&["solve"], &dir.path().join("missing.toml"), dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_tfpe")).arg("solve").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
