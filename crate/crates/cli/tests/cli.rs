use gh_generic_cli::{run, EXIT_BOUNDS, EXIT_BUDGET, EXIT_INVALID, EXIT_OK};
use serde_json::Value;
use std::path::PathBuf;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn ghgen(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("ghgen").chain(args.iter().copied()));
    if out.code == EXIT_OK || out.code == EXIT_BOUNDS {
        assert!(out.stderr.is_empty());
        (out.code, serde_json::from_str(&out.stdout).unwrap())
    } else {
        assert!(out.stdout.is_empty(), "partial output on failure: {}", out.stdout);
        (out.code, serde_json::from_str(&out.stderr).unwrap())
    }
}

fn simplex_json(n: usize) -> String {
    let points: Vec<String> = (0..n).map(|i| format!("\"p{i}\"")).collect();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let row: Vec<&str> = (0..n).map(|j| if i == j { "\"0\"" } else { "\"1\"" }).collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    format!("{{\"points\":[{}],\"matrix\":[{}]}}", points.join(","), rows.join(","))
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn perturbing_a_point_gives_three_four_five() {
    let dir = TempDir::new().unwrap();
    let d1 = write(&dir, "d1.json", &simplex_json(1));
    let (code, out) = ghgen(&["perturb", path(&d1), "--delta", "3", "--c", "1", "--certify"]);
    assert_eq!(code, EXIT_OK);
    let m = &out["space"]["matrix"];
    let mut off: Vec<&str> = vec![m[0][1].as_str().unwrap(), m[0][2].as_str().unwrap(), m[1][2].as_str().unwrap()];
    off.sort();
    assert_eq!(off, ["3", "4", "5"]);
    assert_eq!(out["certificate"]["bounds_met"], Value::Bool(true));
}

#[test]
fn gh_from_a_point_to_a_simplex() {
    let dir = TempDir::new().unwrap();
    let d1 = write(&dir, "d1.json", &simplex_json(1));
    let d3 = write(&dir, "d3.json", &simplex_json(3));
    let (code, out) = ghgen(&["gh", path(&d1), path(&d3)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out["two_dgh"], "1");
    assert_eq!(out["d_gh"], "1/2");
    assert_eq!(out["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn simplex_is_not_generic() {
    let dir = TempDir::new().unwrap();
    let d3 = write(&dir, "d3.json", &simplex_json(3));
    let (code, out) = ghgen(&["info", path(&d3)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out["e"], "0");
    assert_eq!(out["generic"], Value::Bool(false));
}

#[test]
fn csv_and_json_inputs_agree() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "x.csv", "0, 3/4, 1\n3/4, 0, 0.5\n1, 0.5, 0\n");
    let json = write(
        &dir,
        "x.json",
        r#"{"points":["0","1","2"],"matrix":[["0","3/4","1"],["3/4","0","1/2"],["1","1/2","0"]]}"#,
    );
    assert_eq!(ghgen(&["info", path(&csv)]), ghgen(&["info", path(&json)]));
    let (_, v) = ghgen(&["validate", path(&csv)]);
    assert_eq!(v["points"], 3);
}

#[test]
fn output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.csv", "0,2,3,4\n2,0,2,3\n3,2,0,2\n4,3,2,0\n");
    for args in [
        vec!["perturb", path(&x), "--delta", "1/2", "--c", "1/3", "--certify"],
        vec!["gh", path(&x), path(&x)],
        vec!["transform", path(&x), "--spec", "ladder:3/2,shift:1"],
    ] {
        let first = run(std::iter::once("ghgen").chain(args.iter().copied()));
        let second = run(std::iter::once("ghgen").chain(args.iter().copied()));
        assert_eq!(first, second);
        assert_eq!(first.code, EXIT_OK);
    }
}

#[test]
fn invalid_space_reports_the_triangle() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "0,1,5\n1,0,1\n5,1,0\n");
    let (code, err) = ghgen(&["validate", path(&bad)]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(err["error"]["kind"], "metric");
    assert_eq!(err["error"]["witness"]["j"], 1);
}

#[test]
fn argument_and_parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let d3 = write(&dir, "d3.json", &simplex_json(3));
    let junk = write(&dir, "junk.json", "{\"points\": [\"a\"]");
    for args in [
        vec!["perturb", path(&d3), "--delta", "0", "--c", "1"],
        vec!["perturb", path(&d3), "--delta", "x", "--c", "1"],
        vec!["transform", path(&d3), "--spec", "wiggle:2"],
        vec!["hausdorff", path(&d3), "--a", "p0", "--b", "nope"],
        vec!["info", path(&junk)],
        vec!["info", "/definitely/missing.json"],
        vec!["frobnicate"],
    ] {
        let (code, err) = ghgen(&args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
        assert!(err["error"]["message"].is_string());
    }
}

#[test]
fn gh_budget_exhaustion_exits_two() {
    let dir = TempDir::new().unwrap();
    let d3 = write(&dir, "d3.json", &simplex_json(3));
    let (code, err) = ghgen(&["gh", path(&d3), path(&d3), "--budget", "8"]);
    assert_eq!(code, EXIT_BUDGET);
    assert_eq!(err["error"]["witness"]["cells"], 9);
}

#[test]
fn certificate_without_defect_when_over_budget() {
    let dir = TempDir::new().unwrap();
    let d3 = write(&dir, "d3.json", &simplex_json(3));
    let (code, out) = ghgen(&["perturb", path(&d3), "--delta", "3/4", "--c", "1", "--certify", "--budget", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out["certificate"]["e"], Value::Null);
    assert_eq!(out["certificate"]["e_exact"], Value::Bool(false));
}

#[test]
fn hausdorff_between_subsets() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.csv", "0,3,4\n3,0,5\n4,5,0\n");
    let (code, out) = ghgen(&["hausdorff", path(&x), "--a", "0", "--b", "1,2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out["hausdorff"], "4");
}

#[test]
fn projection_flags_shortcut_edges() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "g.json",
        r#"{"vertices":["a","b","c"],"edges":[["a","b","1"],["b","c","1"],["a","c","3"]]}"#,
    );
    let (code, out) = ghgen(&["project", path(&g), "--check-weights"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out["space"]["matrix"][0][2], "2");
    assert_eq!(out["preserves_weights"], Value::Bool(false));
    assert_eq!(out["witness"]["walk"], serde_json::json!(["a", "b", "c"]));

    let split = write(&dir, "split.json", r#"{"vertices":["a","b","c"],"edges":[["a","b","1"]]}"#);
    let (code, err) = ghgen(&["project", path(&split)]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(err["error"]["kind"], "graph");
}

#[test]
fn transform_reports_its_bound() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.csv", "0,1/2,7/4\n1/2,0,3/2\n7/4,3/2,0\n");
    let (code, out) = ghgen(&["transform", path(&x), "--spec", "ladder:1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out["space"]["matrix"][0][1], "1");
    assert_eq!(out["image_gh_bound"], "1/4");
}

#[test]
fn binary_exit_codes_and_streams() {
    let dir = TempDir::new().unwrap();
    let d3 = write(&dir, "d3.json", &simplex_json(3));
    let bin = env!("CARGO_BIN_EXE_ghgen");
    let ok = std::process::Command::new(bin).args(["info", path(&d3)]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(ok.stderr.is_empty());
    let over = std::process::Command::new(bin)
        .args(["gh", path(&d3), path(&d3), "--budget", "1"])
        .output()
        .unwrap();
    assert_eq!(over.status.code(), Some(EXIT_BUDGET));
    assert!(over.stdout.is_empty());
    let err: Value = serde_json::from_slice(&over.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget");
}
