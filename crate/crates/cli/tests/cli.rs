use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use stopdur_core::fullinfo::fidp_value;
use stopdur_core::horizon::ka_geometric;
use stopdur_core::noinfo::{solve_best2, solve_discounted};

fn stopdur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stopdur"))
        .args(args)
        .env_remove("STOPDUR_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = stopdur(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        _ => panic!("unsupported type {name}"),
    }
}

/// Checks `v` against the keywords the shipped schema uses.
fn validate(s: &Value, v: &Value, at: &str) -> Result<(), String> {
    if let Some(t) = s.get("type") {
        let names: Vec<&str> = match t {
            Value::String(one) => vec![one.as_str()],
            Value::Array(many) => many.iter().map(|x| x.as_str().unwrap()).collect(),
            _ => return Err(format!("{at}: bad type keyword")),
        };
        if !names.iter().any(|n| type_matches(n, v)) {
            return Err(format!("{at}: {v} is not one of {names:?}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{at}: {v} not in enum"));
        }
    }
    if let Value::Object(map) = v {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(req) = s.get("required").and_then(Value::as_array) {
            for k in req {
                if !map.contains_key(k.as_str().unwrap()) {
                    return Err(format!("{at}: missing {k}"));
                }
            }
        }
        for (k, child) in map {
            let path = format!("{at}.{k}");
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate(sub, child, &path)?,
                None => match s.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("{path}: not allowed")),
                    Some(sub @ Value::Object(_)) => validate(sub, child, &path)?,
                    _ => {}
                },
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (v, s.get("items")) {
        for (i, item) in items.iter().enumerate() {
            validate(sub, item, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

fn close(cli: &Value, lib: f64) {
    let x = cli.as_f64().expect("number");
    assert!((x - lib).abs() <= 1e-11 * lib.abs().max(1e-300), "{x} vs {lib}");
}

#[test]
fn validator_rejects_bad_documents() {
    let s = schema();
    assert!(validate(&s, &serde_json::json!({"command": "fidp", "params": {}}), "$").is_err());
    assert!(validate(&s, &serde_json::json!({"command": "nope", "params": {}, "results": {}}), "$").is_err());
    assert!(validate(
        &s,
        &serde_json::json!({"command": "fidp", "params": {}, "results": {"x": {"y": 1}}}),
        "$"
    )
    .is_err());
    assert!(validate(&s, &serde_json::json!({"command": "fidp", "params": {}, "results": {}, "z": 1}), "$").is_err());
}

#[test]
fn every_subcommand_validates() {
    let s = schema();
    let runs: &[&[&str]] = &[
        &["noinfo-bc", "--n", "30"],
        &["noinfo-bc", "--n", "30", "--recall", "--overall-best"],
        &["noinfo-best2", "--n", "12"],
        &["noinfo-discount", "--beta", "0.8"],
        &["fidp", "--n", "8", "--grid", "128"],
        &["fidp-recall", "--n", "8", "--grid", "128"],
        &["bcdp", "--n", "8", "--grid", "128", "--recall"],
        &["rh-prior", "--prior", "0.25,0.25,0.5", "--grid", "128"],
        &["rh-geometric", "--p", "0.2", "--n", "6", "--grid", "128"],
        &["ka", "--n", "6", "--grid", "128"],
        &["ka-geometric", "--p", "0.1"],
        &["best2-geometric", "--p", "0.2", "--lattice", "20", "--samples", "1000"],
        &["simulate", "--model", "noinfo-discount", "--samples", "1000"],
        &["constants"],
    ];
    for args in runs {
        let v = json(args);
        validate(&s, &v, "$").unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn outputs_match_library() {
    let v = json(&["noinfo-best2", "--n", "50"]);
    let lib = solve_best2(50).unwrap();
    assert_eq!(v["results"]["k1"], lib.k1);
    assert_eq!(v["results"]["k2"], lib.k2);
    close(&v["results"]["value"], lib.value);

    let v = json(&["noinfo-discount", "--beta", "0.9"]);
    let lib = solve_discounted(0.9).unwrap();
    assert_eq!(v["results"]["threshold"], lib.threshold);
    close(&v["results"]["value"], lib.value);

    let v = json(&["fidp", "--n", "12", "--grid", "256"]);
    let lib = fidp_value(12, 256).unwrap();
    close(&v["results"]["value"], lib.value());
    let crossings = v["results"]["dp_crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 12);
    for (c, l) in crossings.iter().zip(lib.crossings()) {
        if *l == 0.0 {
            assert_eq!(c.as_f64(), Some(0.0));
        } else {
            close(c, *l);
        }
    }

    let v = json(&["ka-geometric", "--p", "0.1"]);
    let lib = ka_geometric(0.1).unwrap();
    close(&v["results"]["threshold"], lib.threshold);
    close(&v["results"]["value"], lib.value);
}

#[test]
fn simulate_is_byte_identical_across_runs_and_threads() {
    let args = ["simulate", "--model", "fidp", "--n", "20", "--samples", "200000", "--seed", "7"];
    let a = stopdur(&args);
    let b = stopdur(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_stopdur"))
        .args(args)
        .env("STOPDUR_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let d = stopdur(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.stdout, d.stdout);
}

#[test]
fn default_seed_is_fixed() {
    let args = ["simulate", "--model", "noinfo-bc", "--samples", "5000"];
    assert_eq!(stopdur(&args).stdout, stopdur(&args).stdout);
}

#[test]
fn csv_layout() {
    let out = stopdur(&["noinfo-best2", "--n", "10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "parameter,index,value");
    assert_eq!(lines[1], "k1,,2");
    assert_eq!(lines[2], "k2,,5");
    assert!(lines[3].starts_with("value,,0.527526455"));
    assert_eq!(lines.len(), 4);

    let out = stopdur(&["fidp", "--n", "5", "--grid", "64", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("thresholds,")).count(), 5);
}

#[test]
fn numbers_have_twelve_significant_digits() {
    let v = json(&["ka-geometric", "--p", "0.1"]);
    let s = v["results"]["mu_star"].to_string();
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    assert_eq!(digits.trim_start_matches('0').len(), 12, "{s}");
}

#[test]
fn constants_report_the_disagreeing_fraction() {
    let v = json(&["constants"]);
    let names = v["results"]["name"].as_array().unwrap();
    let agrees = v["results"]["agrees"].as_array().unwrap();
    assert_eq!(names.len(), 11);
    for (n, a) in names.iter().zip(agrees) {
        let expect = n != "overall_best_fraction";
        assert_eq!(a.as_bool(), Some(expect), "{n}");
    }
}

#[test]
fn out_writes_file() {
    let dir = std::env::temp_dir().join(format!("stopdur-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("best2.json");
    let out = stopdur(&["noinfo-best2", "--n", "9", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["params"]["n"], 9);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(stopdur(&["noinfo-best2"]).status.code(), Some(2));
    assert_eq!(stopdur(&["noinfo-best2", "--n", "1"]).status.code(), Some(2));
    assert_eq!(stopdur(&["noinfo-discount", "--beta", "1.5"]).status.code(), Some(2));
    assert_eq!(stopdur(&["rh-prior", "--prior", "0.5,0.2"]).status.code(), Some(2));
    assert_eq!(stopdur(&["simulate", "--model", "fidp", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(stopdur(&["constants", "--threads", "0"]).status.code(), Some(2));
    // horizons beyond the sampling cap are a numerical failure
    let out = stopdur(&["simulate", "--model", "geometric", "--p", "1e-9", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
