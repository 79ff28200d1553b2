use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superspace")).args(args).output().expect("spawn superspace")
}

fn run_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superspace"))
        .args(args)
        .env("SUPERSPACE_THREADS", threads)
        .output()
        .expect("spawn superspace")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn verify_single_suite() {
    let o = run(&["verify", "--suite", "sl2", "--m", "3", "--n", "1", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "superspace/1");
    assert_eq!(v["checks"][0]["name"], "sl2");
    assert_eq!(v["checks"][0]["passed"], true);
}

#[test]
fn alpha_table_csv() {
    let o = run(&["alpha-table", "--m", "3", "--n", "1", "--jmax", "10", "--pmax", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| h.contains("dev")).expect("deviation column");
    let mut rows = 0;
    for line in lines {
        let dev: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
        assert!(dev < 1e-9, "{line}");
        rows += 1;
    }
    assert!(rows > 100);
}

#[test]
fn spectrum_csv_oscillator() {
    let o = run(&["spectrum", "--m", "3", "--n", "1", "--potential", "oscillator", "--kmax", "2", "--count", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,j,E,multiplicity,residual");
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (k, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let e: f64 = f[2].parse().unwrap();
        assert!((e - (2 * j + k) as f64 - 0.5).abs() < 1e-4, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 9);
}

#[test]
fn potential_file() {
    let dir = std::env::temp_dir().join(format!("superspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v.json");
    // V(u) = u/2 is the oscillator
    std::fs::write(&path, r#"{"kind":"poly_in_u","coeffs":[0.0,0.5]}"#).unwrap();
    let o = run(&["spectrum", "--m", "3", "--n", "1", "--potential", path.to_str().unwrap(), "--kmax", "0", "--count", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["schema"], "superspace/1");

    std::fs::write(&path, r#"{"kind":"table","u":[0.0,1.0],"v":[1.0]}"#).unwrap();
    let o = run(&["spectrum", "--potential", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec!["gram", "--m", "1", "--n", "1"],
        vec!["heisenberg", "--m", "2", "--n", "1"],
        vec!["verify", "--suite", "nope"],
        vec!["frobnicate"],
        vec!["dims", "--m", "x"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn non_positive_m_allowed_where_not_needed() {
    let o = run(&["dims", "--m", "1", "--n", "1", "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn deterministic_and_thread_independent() {
    let args = ["fourier", "--m", "5", "--n", "2", "--seed", "11", "--terms", "15"];
    let a = run_threads(&args, "1");
    let b = run_threads(&args, "4");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["gram", "--m", "3", "--n", "1", "--jmax", "2", "--kmax", "2"];
    assert_eq!(run_threads(&args, "1").stdout, run_threads(&args, "3").stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("superspace-out-{}.json", std::process::id()));
    let o = run(&["divergence-demo", "--terms", "50", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "divergence-demo");
    std::fs::remove_file(&path).ok();
}
