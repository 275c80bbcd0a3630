use assert_cmd::Command;
use serde_json::Value;

fn lenshull() -> Command {
    Command::cargo_bin("lenshull").unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = lenshull().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text.trim()).unwrap()
}

#[test]
fn predict_two_fifths() {
    let (code, out) = run(&["predict", "--p", "2", "--q", "5"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(doc["facets"].as_array().unwrap().len(), 5);
    assert_eq!(doc["spec"]["degeneracy"], "Generic");
    assert!(doc["facets"][0]["support"]["Z"].is_number());
    assert!(doc["facets"][0]["cell"]["radius"].is_number());
}

#[test]
fn predict_is_byte_identical_across_runs() {
    let (_, a) = run(&["predict", "--p", "3", "--q", "8", "--mu", "2"]);
    let (_, b) = run(&["predict", "--p", "3", "--q", "8", "--mu", "2"]);
    assert_eq!(a, b);
}

#[test]
fn degenerate_inputs_exit_2() {
    let (code, out) = run(&["predict", "--p", "1", "--q", "5"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["degeneracy"], "TwoCaps");

    let (code, out) = run(&["predict", "--p", "1", "--q", "2", "--mu", "1", "--nu", "3"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["degeneracy"], "AntiprismOnly");

    let (code, _) = run(&["predict", "--p", "2", "--q", "2000000"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_single_specs() {
    let (code, out) = run(&["verify", "--p", "2", "--q", "7"]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["facets"], 14);
    assert_eq!(report["diff"], Value::Array(vec![]));

    let (code, _) = run(&["verify", "--p", "3", "--q", "10"]);
    assert_eq!(code, 0);

    let (code, out) = run(&["verify", "--p", "2", "--q", "5", "--mu", "2", "--nu", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["ok"], true);
}

#[test]
fn verify_respects_the_oracle_cap() {
    let (code, _) = run(&["verify", "--p", "2", "--q", "7", "--cap", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_grid_prints_one_row_per_slope() {
    let (code, out) = run(&["verify", "--grid", "--qmax", "12"]);
    assert_eq!(code, 0);
    let rows: Vec<Value> = out.lines().map(json).collect();
    // reduced p/q with 2 <= p <= q-2 for q = 5, 7, 8, 9, 10, 11, 12; none for q = 6
    assert_eq!(rows.len(), 2 + 4 + 2 + 4 + 2 + 8 + 2);
    assert!(rows.iter().all(|r| r["ok"] == true));
    let order: Vec<(i64, i64)> = rows
        .iter()
        .map(|r| (r["q"].as_i64().unwrap(), r["p"].as_i64().unwrap()))
        .collect();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);
}

#[test]
fn group_canonicalization() {
    for (gens, expected) in [
        ("1/5,2/5", (2, 5, 1, 1)),
        ("1/2,0;0,1/3", (0, 1, 2, 3)),
        ("1/10,3/10", (3, 10, 1, 1)),
    ] {
        let (code, out) = run(&["group", "--gens", gens]);
        assert_eq!(code, 0);
        let g = json(&out);
        let got = ["p", "q", "mu", "nu"].map(|k| g[k].as_i64().unwrap());
        assert_eq!(got, [expected.0, expected.1, expected.2, expected.3], "{gens}");
    }
    let (code, _) = run(&["group", "--gens", "1/2;x"]);
    assert_eq!(code, 2);
}

#[test]
fn export_formats() {
    let (code, off) = run(&["export", "--p", "2", "--q", "5", "--format", "off4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = off.lines().collect();
    assert_eq!(lines[0], "4OFF");
    assert!(lines[1].starts_with("5 5 "));
    assert_eq!(lines.len(), 2 + 5 + 5);
    assert!(lines[2..7].iter().all(|l| l.split(' ').count() == 4));

    let (code, csv) = run(&["export", "--p", "2", "--q", "7", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 1 + 14);
    assert!(csv.starts_with("kind,vertices,Z,angular_radius"));

    let (code, _) = run(&["export", "--p", "2", "--q", "7", "--format", "svg"]);
    assert_eq!(code, 2);
}

#[test]
fn export_json_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.json");
    let (code, _) = run(&["export", "--p", "3", "--q", "11", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = lenshull_core::export::from_json(&text).unwrap();
    let (_, predicted) = run(&["predict", "--p", "3", "--q", "11"]);
    let predicted = lenshull_core::export::from_json(&predicted).unwrap();
    assert_eq!(doc.facet_sets(), predicted.facet_sets());
    assert!(doc.report.unwrap().all_pass);
}

#[test]
fn unit_sphere_rescales_points() {
    let (_, out) = run(&["predict", "--p", "2", "--q", "5", "--unit-sphere"]);
    let doc = json(&out);
    let c: Vec<f64> = doc["points"][0]["coords"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let r: f64 = c.iter().map(|x| x * x).sum();
    assert!((r - 1.0).abs() < 1e-15);
}

#[test]
fn certify_passes() {
    let (code, out) = run(&["certify", "--p", "5", "--q", "13", "--nu", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["all_pass"], true);
}
