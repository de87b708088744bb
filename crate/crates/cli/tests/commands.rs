use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heatrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatrace")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rational(v: &Value) -> (String, String) {
    (v["num"].as_str().unwrap().to_string(), v["den"].as_str().unwrap().to_string())
}

const TORUS: &str = r#"
[domain]
boundary = "periodic"
lengths = [6.283185307179586]
points = [128]

[[potential.terms]]
kind = "bump"
center = [3.141592653589793]
radius = 2.0
amplitude = 1.0

[times.log]
lo = 1e-3
hi = 1e-1
count = 8
"#;

#[test]
fn coeff_reproduces_tabulated_values() {
    let out = heatrace(&["coeff", "-t", "2;2", "-t", "0,0;0,0;0,0", "-t", "1;0", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rational(&rows[0]["coefficient"]), ("1".into(), "40".into()));
    assert_eq!(rows[0]["cross_check_agrees"], Value::Bool(true));
    assert_eq!(rational(&rows[1]["coefficient"]), ("1".into(), "6".into()));
    assert_eq!(rows[1]["normalization_power"], 2);
    assert_eq!(rational(&rows[2]["coefficient"]), ("0".into(), "1".into()));
    assert_eq!(rows[2]["flag"], "parity");
}

#[test]
fn coeff_sweep_and_csv() {
    let out = heatrace(&["coeff", "--sweep", "2", "--dimension", "1", "--order", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# tool=heatrace version="));
    assert!(lines[1].starts_with("# config_sha256="));
    assert_eq!(lines[2], "tuple,j,dimension,order,num,den,power,flag,cross_check");
    // ((0),(2)), ((1),(1)), ((2),(0)), all 1/12
    assert_eq!(lines.len(), 6);
    assert!(lines[3..].iter().all(|l| l.contains(",1,12,1,,")));
}

#[test]
fn bad_tuples_and_budgets_are_configuration_errors() {
    let out = heatrace(&["coeff", "-t", "2;x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed index tuple"));
    let out = heatrace(&["coeff", "-t", "10;8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"));
    assert_eq!(heatrace(&["coeff"]).status.code(), Some(2));
}

#[test]
fn unknown_keys_name_their_path() {
    let dir = tempfile::tempdir().unwrap();
    let toml = write(dir.path(), "a.toml", &TORUS.replace("points = [128]", "points = [128]\npointz = [3]"));
    let out = heatrace(&["trace", "-c", &toml]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("domain.pointz"), "{}", stderr(&out));
    let js = write(dir.path(), "a.json", r#"{"fit": {"powers": [1.0], "weigth": 2}}"#);
    let out = heatrace(&["fit", "-c", &js]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("fit.weigth"));
}

#[test]
fn missing_sections_and_invalid_domains_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", TORUS);
    let out = heatrace(&["fit", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`fit`"));
    let small = write(dir.path(), "b.toml", &TORUS.replace("points = [128]", "points = [8]"));
    assert_eq!(heatrace(&["trace", "-c", &small]).status.code(), Some(2));
    let out = heatrace(&["boundary", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Dirichlet"));
}

#[test]
fn invariants_export_and_reuse_order_eight() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", TORUS);
    let out = heatrace(&["invariants", "-c", &cfg, "--min-order", "2", "--max-order", "8", "--dimension", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    let inv = doc["invariants"].as_array().unwrap();
    assert_eq!(inv.len(), 7);
    assert_eq!(inv[0]["canonical_text"], "-1*[V]");
    let nonzero: Vec<u64> =
        inv.iter().filter(|e| e.get("zero_reason").is_none()).map(|e| e["order"].as_u64().unwrap()).collect();
    assert_eq!(nonzero, vec![2, 4, 6, 8]);
    assert_eq!(inv[3]["order"], 5);
    assert_eq!(inv[3]["zero_reason"], "odd order");
    assert!(inv[3]["canonical"]["terms"].as_array().unwrap().is_empty());
    assert_eq!(inv[6]["value"], doc["h2_diagnostic"]["p8"]);
    assert_eq!(inv[0]["raw"]["normalization_power"], 1);
}

#[test]
fn invariants_without_potential_are_symbolic_only() {
    let out = heatrace(&["invariants", "--min-order", "4", "--max-order", "4", "--dimension", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(doc.get("h2_diagnostic").is_none());
    assert!(doc["invariants"][0].get("value").is_none());
    assert_eq!(rational(&doc["invariants"][0]["canonical"]["terms"][0]["coefficient"]), ("1".into(), "2".into()));
}

#[test]
fn trace_output_is_deterministic_and_digest_is_format_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", TORUS);
    let a = heatrace(&["trace", "-c", &cfg]);
    let b = heatrace(&["trace", "-c", &cfg]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(!text.contains('\r'));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,z");
    assert_eq!(rows.len(), 9);
    assert!(rows[1].starts_with("0.001,-"));

    let as_json = r#"{
        "domain": {"boundary": "periodic", "lengths": [6.283185307179586], "points": [128]},
        "potential": {"terms": [{"kind": "bump", "center": [3.141592653589793], "radius": 2.0, "amplitude": 1.0}]},
        "times": {"log": {"lo": 0.001, "hi": 0.1, "count": 8}}
    }"#;
    let js = write(dir.path(), "a.json", as_json);
    let c = heatrace(&["trace", "-c", &js]);
    assert_eq!(String::from_utf8(c.stdout).unwrap(), text);
}

#[test]
fn trace_with_duhamel_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = TORUS.replace("[domain]", "[duhamel]\nj_max = 2\n\n[domain]");
    let cfg = write(dir.path(), "a.toml", &cfg);
    let out_path = dir.path().join("series.csv");
    let out = heatrace(&["trace", "-c", &cfg, "-o", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(rows.next(), Some("t,z,a1,a2,remainder_bound"));
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[2] - v[3]).abs() <= v[4]);
    }
}

#[test]
fn fit_reports_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = TORUS.replace("count = 8", "count = 20") + "\n[fit]\npowers = [1.0, 2.0, 3.0]\n";
    let cfg = write(dir.path(), "a.toml", &cfg);
    let out = heatrace(&["fit", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["estimates"].as_array().unwrap().len(), 3);
    assert!(doc["condition_number"].as_f64().unwrap() >= 1.0);
    assert!(doc["meta"]["config_sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn boundary_gap_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"
[domain]
boundary = "dirichlet"
lengths = [3.0]
points = [149]
margin = 0.5

[[potential.terms]]
kind = "bump"
center = [1.5]
radius = 1.0
amplitude = 1.0

[times]
values = [0.0316, 0.1, 0.316, 1.0]
"#;
    let cfg = write(dir.path(), "a.toml", cfg);
    let out = heatrace(&["boundary", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["monotone"], Value::Bool(true));
    assert!(doc["fit"]["slope"].as_f64().unwrap() < 0.0);
    let csv = heatrace(&["boundary", "-c", &cfg, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.contains("\n# fit slope=-"));
    assert!(text.contains("\nt,z_dirichlet,z_periodic,gap,resolved\n"));
}

#[test]
fn verify_passes_and_is_byte_identical() {
    let a = heatrace(&["verify"]);
    let b = heatrace(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["numeric"], Value::Bool(false));
    assert_eq!(doc["failed"], 0);
    let informative: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "info")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(informative.contains(&"quartic_quadratic_block_vs_printed"));
}

#[test]
fn tampered_table_fails_the_named_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = heatrace_cli::CoefficientTable::reference();
    let entry = table.entries.iter_mut().find(|e| e.name == "second_derivative_pair").unwrap();
    entry.expected.den = "41".into();
    let path = write(dir.path(), "table.json", &serde_json::to_string(&table).unwrap());
    let out = heatrace(&["verify", "--table", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("coefficient_table/second_derivative_pair"));
    let doc = json(&out);
    assert_eq!(doc["status"], "fail");
    assert_eq!(doc["failed"], 1);
    let failing: Vec<&Value> = doc["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert_eq!(failing[0]["name"], "second_derivative_pair");

    let broken = write(dir.path(), "broken.json", r#"{"entries": [{"name": "x", "tuple": [[0]], "expect": {}}]}"#);
    assert_eq!(heatrace(&["verify", "--table", &broken]).status.code(), Some(2));
}

#[test]
fn verify_tolerances_come_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v.toml", "[verify.tolerances]\nfit_third = 0.2\n");
    let out = heatrace(&["verify", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["tolerances"]["fit_third"], 0.2);
    assert_eq!(doc["tolerances"]["fit_leading"], 0.01);
    let plain = json(&heatrace(&["verify"]));
    assert_ne!(doc["meta"]["config_sha256"], plain["meta"]["config_sha256"]);
}

#[test]
fn help_lists_every_subcommand() {
    let out = heatrace(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["coeff", "invariants", "trace", "fit", "boundary", "verify"] {
        assert!(text.contains(cmd));
    }
}
