use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asympure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn bott_example() {
    let v = json(&["bott", "--n", "2", "--d", "-4"]);
    assert_eq!(v["h"], serde_json::json!(["0", "0", "3"]));
}

#[test]
fn product_example() {
    let v = json(&["product", "--n", "2", "--a1", "2", "--a2", "-4"]);
    assert_eq!(v["h"][2], "18");
}

#[test]
fn predict_example() {
    let v = json(&["predict", "--n", "2", "--k", "1", "--A", "9", "--B", "3"]);
    assert_eq!(v["kernel_dim"], "154");
    assert_eq!(v["kernel_labels"], serde_json::json!(["(9,3)"]));
}

#[test]
fn oracle_example() {
    let v = json(&[
        "oracle",
        "--n",
        "2",
        "--k",
        "1",
        "--A",
        "9",
        "--B",
        "3",
        "--operator",
        "special",
    ]);
    assert_eq!(v["rank"], "396");
    assert_eq!(v["kernel_dim"], "154");
    assert_eq!(v["certified"], true);
}

#[test]
fn oracle_from_operator_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corner.json");
    std::fs::write(
        &path,
        r#"{"n": 2, "k": 1, "terms": [{"coeff": 1, "alpha": [1,0,0], "beta": [1,0,0]}]}"#,
    )
    .unwrap();
    let v = json(&[
        "oracle",
        "--A",
        "2",
        "--B",
        "1",
        "--operator-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(v["kernel_dim"], "12");
}

#[test]
fn asymptotics_example() {
    let v = json(&[
        "asymptotics",
        "--n",
        "2",
        "--k",
        "1",
        "--a1",
        "2",
        "--a2",
        "1",
    ]);
    assert_eq!(v["h_hat"], serde_json::json!(["0", "6", "0", "0"]));
    assert_eq!(v["verdict"], "pure(1)");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "series", "--n", "2", "--k", "1", "--a1", "1", "--a2", "1", "--m", "2..6", "--engine",
        "both",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["bott", "--n", "0", "--d", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["predict", "--n", "2", "--k", "1", "--A", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn size_cap_exits_3() {
    let out = run(&[
        "--size-cap",
        "100",
        "oracle",
        "--n",
        "2",
        "--k",
        "1",
        "--A",
        "9",
        "--B",
        "3",
        "--operator",
        "special",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("550") && err.contains("396"), "{err}");
}

fn scan_csv(out: &Path) -> Vec<csv::StringRecord> {
    let mut reader = csv::Reader::from_path(out).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["n", "k", "a1", "a2", "case", "h_hat_0", "h_hat_1", "h_hat_2", "h_hat_3", "verdict"]
    );
    reader.records().map(Result::unwrap).collect()
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let status = run(&[
        "scan",
        "--n",
        "2",
        "--k",
        "1",
        "--a1",
        "0..4",
        "--a2",
        "0..4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let rows = scan_csv(&out);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r[9].starts_with("pure")));
    let row = rows.iter().find(|r| &r[2] == "2" && &r[3] == "1").unwrap();
    assert_eq!(&row[6], "6");
}

#[test]
fn verify_small_passes() {
    assert_eq!(run(&["verify", "--suite", "small"]).status.code(), Some(0));
}

#[test]
fn tampered_cache_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let cache_arg = cache.to_str().unwrap();
    let first = json(&["--cache", cache_arg, "bott", "--n", "2", "--d", "3"]);
    assert_eq!(first["h"][0], "10");
    // a cached hit returns the stored value
    assert_eq!(
        json(&["--cache", cache_arg, "bott", "--n", "2", "--d", "3"]),
        first
    );

    let text = std::fs::read_to_string(&cache)
        .unwrap()
        .replace("\"10\"", "\"11\"");
    std::fs::write(&cache, text).unwrap();
    let out = run(&["--cache", cache_arg, "verify"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("bott:n=2;d=3"), "{stdout}");
}
