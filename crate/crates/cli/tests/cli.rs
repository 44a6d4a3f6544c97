#![allow(clippy::approx_constant)]

use std::fs;
use std::process::{Command, Output};

fn bicoef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicoef"))
        .args(args)
        .env_remove("BICOEF_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> Vec<u8> {
    fs::read(format!("{}/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn bound_canonical_values() {
    let out = bicoef(&["bound", "--pair", "PP", "--alpha", "0", "--beta", "0", "--phi", "caratheodory", "--psi", "caratheodory"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("bound"));
    let v = json(&out);
    assert_eq!(v["a2_printed"], 1.41421356);
    assert_eq!(v["a3_printed"], 2.0);
}

#[test]
fn bound_degenerate_exits_2() {
    let out = bicoef(&["bound", "--pair", "PP", "--phi-coeffs", "1,2", "--psi-coeffs", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert!(v["a2_printed"].is_null());
    assert_eq!(v["degenerate"]["a2_printed"], true);
}

#[test]
fn bound_ll_flags_sigma() {
    let out = bicoef(&["bound", "--pair", "LL", "--alpha", "1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["a2_generic"], 1.41421356);
    assert_eq!(v["sigma_printed"], -20.0);
    let fields: Vec<&str> = v["discrepancies"].as_array().unwrap().iter().map(|d| d["field"].as_str().unwrap()).collect();
    assert!(fields.contains(&"sigma"));
}

#[test]
fn explicit_coefficients_win_over_presets() {
    let preset = json(&bicoef(&["bound", "--pair", "MM", "--phi", "strong:0.5"]));
    let both = json(&bicoef(&["bound", "--pair", "MM", "--phi", "strong:0.5", "--phi-coeffs", "2,2"]));
    let plain = json(&bicoef(&["bound", "--pair", "MM"]));
    assert_eq!(preset["phi"][0], 1.0);
    assert_eq!(both, plain);
}

#[test]
fn audits() {
    let pp = json(&bicoef(&["audit", "--theorem", "PP", "--grid", "0:1:0.25"]));
    assert_eq!(pp["points"], 25);
    assert!(pp["discrepancies"].as_array().unwrap().is_empty());
    let ll = json(&bicoef(&["audit", "--theorem", "LL", "--grid", "0:1:0.25"]));
    let sigma: Vec<_> = ll["discrepancies"].as_array().unwrap().iter().filter(|d| d["field"] == "sigma").collect();
    assert_eq!(sigma.len(), 16);
    assert!(sigma.iter().all(|d| d["witness"]["alpha"] != 0.0 && d["witness"]["beta"] != 0.0));
    let single = json(&bicoef(&["audit", "--theorem", "MM", "--grid", "0:0:1"]));
    assert_eq!(single["points"], 1);
    assert!(single["discrepancies"].as_array().unwrap().is_empty());
    assert_eq!(bicoef(&["audit", "--theorem", "LL"]).stdout, bicoef(&["audit", "--theorem", "LL"]).stdout);
}

#[test]
fn sweep_csv_columns() {
    let out = bicoef(&["sweep", "--pair", "PP", "--what", "both", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theorem,alpha,beta,B1,B2,D1,D2,quantity,max_value,bound,gap,attained"));
    assert_eq!(lines.next(), Some("PP,0,0,2,2,2,2,a2,1.41421356,1.41421356,0,true"));
    assert!(lines.next().unwrap().starts_with("PP,0,0,2,2,2,2,a3,"));
}

#[test]
fn sweep_degenerate_exits_2() {
    let out = bicoef(&["sweep", "--pair", "PP", "--phi-coeffs", "1,2", "--psi-coeffs", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn expand_and_verify() {
    let v = json(&bicoef(&["expand", "--class", "M", "--alpha", "1", "--a2", "0.5", "--a3", "0.25"]));
    assert_eq!(v["engine"]["e1"]["re"], 1.0);
    assert_eq!(v["engine"]["e2"]["re"], 0.5);
    assert_eq!(v["agree"], true);
    let float = json(&bicoef(&["expand", "--class", "L", "--alpha", "0.3", "--a2", "0.5", "--a3", "-1", "--a3-im", "0.2", "--mode", "float"]));
    assert_eq!(float["agree"], true);
    let out = bicoef(&["verify", "--suite", "identities", "--mode", "exact", "--seed", "7", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bicoef(&["verify", "--suite", "derivation", "--mode", "float", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["bogus"][..],
        &["bound"],
        &["bound", "--pair", "XY"],
        &["bound", "--pair", "LL", "--alpha", "2"],
        &["bound", "--pair", "PP", "--phi", "nonsense"],
        &["audit", "--theorem", "PP", "--grid", "0:1"],
        &["sweep", "--pair", "PP", "--what", "a4"],
        &["sweep", "--pair", "PP", "--radial-steps", "1"],
        &["bound", "--pair", "PP", "--format", "xml"],
    ] {
        assert_eq!(bicoef(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(bicoef(&["--help"]).status.code(), Some(0));
    assert_eq!(bicoef(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_and_env() {
    let dir = std::env::temp_dir().join(format!("bicoef-cli-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.conf");
    fs::write(&path, "# coarse grid\nradial_steps = 3\nphase_steps = 4\nsamples = 10\n").unwrap();
    let args = ["sweep", "--pair", "PM", "--alpha", "0.5", "--phi-coeffs", "2,1", "--what", "a3"];
    let with_flag = bicoef(&[&["--config", path.to_str().unwrap()][..], &args[..]].concat());
    let with_env = Command::new(env!("CARGO_BIN_EXE_bicoef"))
        .args(args)
        .env("BICOEF_CONFIG", &path)
        .output()
        .unwrap();
    let explicit = bicoef(&[&args[..], &["--radial-steps", "3", "--phase-steps", "4", "--samples", "10"][..]].concat());
    assert_eq!(with_flag.status.code(), Some(0));
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_eq!(with_flag.stdout, explicit.stdout);
    fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(bicoef(&["--config", path.to_str().unwrap(), "table"]).status.code(), Some(1));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn golden_outputs_are_stable() {
    let cases: [(&str, &[&str]); 5] = [
        ("audit", &["audit", "--theorem", "LL", "--grid", "0:1:0.5"]),
        ("sweep", &["sweep", "--pair", "PP", "--alpha", "0", "--beta", "0", "--phi", "caratheodory", "--psi", "caratheodory", "--what", "a2"]),
        ("expand", &["expand", "--class", "M", "--alpha", "1", "--a2", "0.5", "--a3", "0.25"]),
        ("verify", &["verify", "--suite", "identities", "--mode", "exact", "--seed", "7", "--samples", "20"]),
        ("table", &["table"]),
    ];
    for (name, args) in cases {
        assert_eq!(bicoef(args).stdout, golden(name), "{name}");
    }
}

#[test]
fn table_quotes_reference_values() {
    let v = json(&bicoef(&["table"]));
    let texts: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["text"].as_str().unwrap()).collect();
    assert_eq!(&texts[..4], ["1.5894", "2", "1.507", "1.224"]);
    assert_eq!(v["rows"][4]["kind"], "computed");
    assert!(!v["notes"].as_array().unwrap().is_empty());
}
