//! End-to-end runs of the `fdt` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdt")).args(args).output().expect("binary runs")
}

fn text(out: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
}

fn write(path: &Path, value: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(value).unwrap()).unwrap();
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn triangle() -> Value {
    let row = |u: usize, v: usize| json!({"coef": {u.to_string(): "1", v.to_string(): "1"}, "rhs": "1"});
    json!({
        "kind": "binary",
        "name": "k3",
        "num_vars": 3,
        "objective": ["1", "1", "1"],
        "rows": [row(0, 1), row(1, 2), row(0, 2)],
    })
}

/// Solves the triangle at the all-halves point and returns the certificate path.
fn triangle_certificate(dir: &Path) -> std::path::PathBuf {
    let inst = dir.join("k3.json");
    let point = dir.join("half.json");
    let cert = dir.join("cert.json");
    write(&inst, &triangle());
    write(&point, &json!({"values": ["1/2", "1/2", "1/2"]}));
    let out = fdt(&[
        "--rational",
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--point",
        point.to_str().unwrap(),
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out));
    cert
}

fn verify(dir: &Path, cert: &Path) -> Output {
    fdt(&[
        "verify",
        "--cert",
        cert.to_str().unwrap(),
        "--instance",
        dir.join("k3.json").to_str().unwrap(),
    ])
}

#[test]
fn triangle_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cert = triangle_certificate(dir.path());
    let value = read(&cert);
    assert_eq!(value["mode"], "rational");
    assert_eq!(value["factor"], "4/3");
    let out = verify(dir.path(), &cert);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out));
    assert!(text(&out).contains("valid"));
}

#[test]
fn tampered_weights_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = triangle_certificate(dir.path());
    let mut value = read(&cert);
    let k = value["weights"].as_array().unwrap().len();
    value["weights"] = json!(vec!["1"; k]);
    write(&cert, &value);
    let out = verify(dir.path(), &cert);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("weights"), "{}", text(&out));
}

#[test]
fn tampered_solution_names_the_violated_row() {
    let dir = tempfile::tempdir().unwrap();
    let cert = triangle_certificate(dir.path());
    let mut value = read(&cert);
    value["solutions"][0] = json!([0, 0, 0]);
    write(&cert, &value);
    let out = verify(dir.path(), &cert);
    assert_eq!(out.status.code(), Some(1));
    let msg = text(&out);
    assert!(msg.contains("infeasible") && msg.contains("row"), "{msg}");
}

#[test]
fn domtoip_reports_an_unbounded_gap() {
    // 2 x0 + 2 x1 = 1 has fractional points but no binary one.
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("odd.json");
    let point = dir.path().join("ones.json");
    write(
        &inst,
        &json!({
            "kind": "binary",
            "num_vars": 2,
            "rows": [{"coef": {"0": "2", "1": "2"}, "sense": "=", "rhs": "1"}],
        }),
    );
    write(&point, &json!([1, 1]));
    let out = fdt(&["domtoip", "--instance", inst.to_str().unwrap(), "--point", point.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out));
}

#[test]
fn tap_batch_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = fdt(&[
        "--seed",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
        "gen",
        "tap",
        "--levels",
        "4",
        "--count",
        "3",
    ]);
    assert!(out.status.success(), "{}", text(&out));
    let manifest = read(&dir.path().join("manifest.json"));
    assert_eq!(manifest["levels"], 4);
    assert_eq!(manifest["edges"], 14);
    assert_eq!(manifest["links"], 28);
    assert_eq!(manifest["count"], 3);
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 4);
}

#[test]
fn bench_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |stem: &str| {
        let stem = dir.path().join(stem);
        let out = fdt(&[
            "--out",
            stem.to_str().unwrap(),
            "bench-tap",
            "--min-levels",
            "3",
            "--max-levels",
            "4",
            "--count",
            "4",
        ]);
        assert!(out.status.success(), "{}", text(&out));
        std::fs::read(stem.with_extension("csv")).unwrap()
    };
    let a = run("first");
    let b = run("second");
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
