use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calderon-born"))
        .args(args)
        .current_dir(dir)
        .env_remove("CALDERON_BORN_CACHE")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn table(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn spectrum_of_zero_potential() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"d": 3, "kappa": 2.4674011002723395, "potential": {"type": "piecewise", "breaks": [1.0], "values": [0.0]}, "L": 10, "tol": 1e-11}"#,
    );
    let out = run(&["spectrum", "--config", &cfg, "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("o/spectrum.csv")).unwrap();
    assert!(text.starts_with("# calderon-born "));
    assert!(text.contains("# config_sha256 "));
    let rows = table(&text);
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
    }
    // κ = π²/4 gives √κ cot √κ − 1 = −1
    assert!((rows[0][2].parse::<f64>().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn cache_round_trip_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"d": 3, "kappa": -2.0, "potential": {"type": "piecewise", "breaks": [0.3333333333333333, 0.6666666666666666, 1.0], "values": [2.0, 1.0, 2.0]}, "L": 20, "tol": 1e-10}"#,
    );
    assert!(run(&["spectrum", "--config", &cfg, "--out", "a"], dir.path()).status.success());
    assert_eq!(std::fs::read_dir(dir.path().join("a/cache")).unwrap().count(), 1);
    let first = std::fs::read(dir.path().join("a/spectrum.csv")).unwrap();
    assert!(run(&["spectrum", "--config", &cfg, "--out", "a"], dir.path()).status.success());
    let cached = std::fs::read(dir.path().join("a/spectrum.csv")).unwrap();
    assert!(run(&["spectrum", "--config", &cfg, "--out", "b", "--no-cache"], dir.path()).status.success());
    let fresh = std::fs::read(dir.path().join("b/spectrum.csv")).unwrap();
    assert_eq!(first, cached);
    assert_eq!(first, fresh);
    assert!(!dir.path().join("b/cache").exists());
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(
        dir.path(),
        "u.json",
        r#"{"d": 3, "potential": {"type": "cosine", "amp": 1, "freq": 2, "offset": -5}, "L": 10, "tol": 1e-10, "colour": "red"}"#,
    );
    assert_eq!(run(&["spectrum", "--config", &unknown], dir.path()).status.code(), Some(2));
    let energy = write_config(
        dir.path(),
        "e.json",
        r#"{"d": 3, "kappa": 1.0, "potential": {"type": "cosine", "amp": 1, "freq": 2, "offset": -5}, "L": 10, "tol": 1e-10}"#,
    );
    assert_eq!(run(&["kappa-star", "--config", &energy], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--config", "missing.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn kappa_star_of_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"d": 3, "potential": {"type": "piecewise", "breaks": [1.0], "values": [1.5]}, "L": 20, "tol": 1e-11}"#,
    );
    let out = run(&["kappa-star", "--config", &cfg, "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(&std::fs::read_to_string(dir.path().join("o/kappa_star.csv")).unwrap());
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!((last + 1.5).abs() < 1e-7, "{last}");
}

#[test]
fn empty_series_gives_flat_zero_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"d": 3, "kappa": -1.0, "potential": {"type": "piecewise", "breaks": [1.0], "values": [0.0]}, "L": 10, "tol": 1e-11, "grid": {"r_min": 0.01, "n": 50}}"#,
    );
    let out = run(&["born-profile", "--config", &cfg, "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(&std::fs::read_to_string(dir.path().join("o/born_profile.csv")).unwrap());
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() == 0.0));
    let svg = std::fs::read_to_string(dir.path().join("o/born_profile.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn born_fourier_precision_failure_is_numerical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"d": 3, "kappa": -10.0, "potential": {"type": "piecewise", "breaks": [0.5, 1.0], "values": [1.0, 0.0]}, "L": 40, "tol": 1e-11, "xi": {"max": 60.0, "n": 4, "tol": 1e-9}}"#,
    );
    assert_eq!(run(&["born-fourier", "--config", &cfg, "--out", "o"], dir.path()).status.code(), Some(3));
}

#[test]
fn reproduce_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["reproduce", "--figure", "1", "--out", "a"], dir.path());
    let b = run(&["reproduce", "--figure", "1", "--out", "b", "--no-cache"], dir.path());
    let c = run(&["reproduce", "--figure", "1", "--out", "a"], dir.path());
    for o in [&a, &b, &c] {
        assert!(matches!(o.status.code(), Some(0) | Some(4)), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["report.json", "a_kappa_zero.csv", "d_kappa_star.svg", "kappa_star.csv"] {
        let x = std::fs::read(dir.path().join("a/fig1").join(f)).unwrap();
        let y = std::fs::read(dir.path().join("b/fig1").join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("a/fig1/report.json")).unwrap()).unwrap();
    assert_eq!(report["panels"].as_array().unwrap().len(), 4);
    assert_eq!(report["passed"].as_bool().unwrap(), a.status.code() == Some(0));
}
