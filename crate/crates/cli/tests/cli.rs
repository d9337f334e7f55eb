use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tamecut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamecut")).args(args).output().expect("binary runs")
}

fn words(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn report(args: &[&str]) -> Value {
    let out = tamecut(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn dirichlet_values() {
    let r = report(&["dirichlet", "--n", "0"]);
    assert_eq!(r["report_version"], 1);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["value"].as_f64(), Some(1.0));
    let one = report(&["dirichlet", "--n", "1"])["result"]["value"].as_f64().unwrap();
    assert!((one - (1.0 / 3.0 + 2.0 * 3f64.sqrt() / std::f64::consts::PI)).abs() < 1e-12);
    let huge = report(&["dirichlet", "--n", "123456789012345678901234567890"]);
    let v = huge["result"]["value"].as_f64().unwrap();
    assert!(v > 27.0 && v < 29.0, "{v}");
}

#[test]
fn exit_codes() {
    assert_eq!(tamecut(&["ball", "--group", "pq", "--p", "2", "--n", "2"]).status.code(), Some(2));
    assert_eq!(tamecut(&["ball", "--group", "pq", "--p", "2", "--q", "4", "--n", "2"]).status.code(), Some(2));
    assert_eq!(tamecut(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tamecut(&["--tol", "-1", "dirichlet", "--n", "3"]).status.code(), Some(2));

    let out = tamecut(&["--no-cache", "--budget", "100", "ball", "--group", "bs", "--p", "2", "--q", "3", "--n", "8"]);
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["status"], "resource_exhausted");
    assert!(r["result"]["radius_reached"].as_u64().is_some());
}

#[test]
fn lamplighter_verification() {
    let r = report(&["--no-cache", "verify", "--family", "lamplighter", "--p", "2", "--n", "3"]);
    assert_eq!(r["result"]["all_cover"], true);
    assert_eq!(r["result"]["all_consistent"], true);
    let cert = &r["result"]["cuts"][0]["cut"]["norm_cert"];
    assert_eq!((cert["lower"].as_f64(), cert["upper"].as_f64()), (Some(1.0), Some(1.0)));
}

#[test]
fn csv_columns() {
    let out = tamecut(&["--format", "csv", "dirichlet", "--n", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("command,n,value,lower,upper,method,seed"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 7);
    assert_eq!(row[0], "dirichlet");
    assert_eq!(row[6], "0");

    let out = tamecut(&words("--no-cache --format csv fit-growth --group pq --p 2 --q 3 --ns 1,2,3"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command,n,"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn runs_are_byte_identical() {
    let cases: [&[&str]; 4] = [
        &["--no-cache", "--seed", "5", "--tol", "1e-6", "hardy", "--random", "30", "--samples", "3"],
        &["--no-cache", "--seed", "5", "rd-fit", "--group", "lamplighter", "--p", "2", "--n", "4", "--samples", "3"],
        &["--no-cache", "--seed", "5", "verify", "--group", "pq", "--p", "2", "--q", "3", "--ns", "1,2", "--extend"],
        &["--no-cache", "--format", "csv", "cut", "--group", "semidirect", "--matrix", "1,1;0,1", "--ns", "1,2,3"],
    ];
    for args in cases {
        let (a, b) = (tamecut(args), tamecut(args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = tamecut(&["--no-cache", "--seed", "6", "--tol", "1e-6", "hardy", "--random", "30", "--samples", "3"]);
    assert_ne!(other.stdout, tamecut(cases[0]).stdout);
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = tamecut(&["--out", path.to_str().unwrap(), "dirichlet", "--n", "2"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "dirichlet");
}

fn cache_cmd(dir: &Path, rest: &[&str]) -> Value {
    let mut args = vec!["--cache-dir", dir.to_str().unwrap(), "cache"];
    args.extend(rest);
    report(&args)
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let built = cache_cmd(dir.path(), &["build", "--group", "pq", "--p", "2", "--q", "3", "--n", "3"]);
    assert_eq!(built["result"]["size"], 53);
    let listed = cache_cmd(dir.path(), &["list"]);
    assert_eq!(listed["result"]["entries"][0]["radius"], 3);

    // Reports do not depend on whether the cache was warm.
    let cache_dir = dir.path().to_str().unwrap();
    let warm = tamecut(&[&["--cache-dir", cache_dir][..], &words("ball --group pq --p 2 --q 3 --n 3")].concat());
    let cold = tamecut(&["--no-cache", "ball", "--group", "pq", "--p", "2", "--q", "3", "--n", "3"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"].as_object_mut().unwrap().remove("cache");
        v
    };
    assert_eq!(strip(&warm), strip(&cold));

    cache_cmd(dir.path(), &["clear"]);
    assert_eq!(cache_cmd(dir.path(), &["list"])["result"]["entries"], serde_json::json!([]));
}
