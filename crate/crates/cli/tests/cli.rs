use std::collections::BTreeSet;
use std::path::PathBuf;

use isoframe_cli::{run, Outcome};
use serde_json::Value;

fn call(args: &[&str]) -> Outcome {
    let mut argv = vec!["isoframe"];
    argv.extend_from_slice(args);
    run(argv)
}

fn ok(args: &[&str]) -> String {
    let out = call(args);
    assert_eq!(out.code, 0, "args {args:?} failed: {}", out.stderr);
    out.stdout
}

fn plain(args: &[&str]) -> f64 {
    let mut full = args.to_vec();
    full.push("--plain");
    ok(&full).trim().parse().expect("plain output is a number")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).expect("stdout is JSON")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().expect("object").keys().cloned().collect()
}

#[test]
fn class_one_mean_plain() {
    let v = plain(&["mean-function", "--f", "x", "--h", "pow(2)", "--g", "id", "--interval", "1,2"]);
    assert!((v - (7.0f64 / 3.0).sqrt()).abs() < 1e-12);
    assert_eq!(format!("{v:.6}"), "1.527525");
}

#[test]
fn square_addition_plain() {
    let v = plain(&["arith", "add", "--g", "pow(2)", "1", "2"]);
    assert!((v - 5f64.sqrt()).abs() < 1e-12);
    assert_eq!(format!("{v:.6}"), "2.236068");
}

#[test]
fn stolarsky_geometric_branch_prints_six() {
    assert_eq!(ok(&["stolarsky", "--p", "0", "--q", "0", "4", "9", "--plain"]), "6\n");
}

#[test]
fn golden_json_documents() {
    let cases: &[(&str, &[&str])] = &[
        ("mean_function_class1.json", &["mean-function", "--f", "x", "--h", "pow(2)", "--g", "id", "--interval", "1,2"]),
        ("mean_numbers_exp.json", &["mean-numbers", "--g", "exp", "1", "2"]),
        ("convexity_square.json", &["convexity", "--f", "x^2", "--g", "id", "--h", "id", "--interval", "-1,1", "--verify", "1000", "--seed", "11"]),
        ("convex_set_counterexample.json", &["convex-set", "--dim", "2", "--predicate", "x+y>2", "--g", "recip", "--trials", "10000", "--seed", "7"]),
        ("compare_means_ln_id.json", &["compare-means", "--g", "ln", "--h", "id", "--interval", "1,4"]),
        ("stolarsky_2_1.json", &["stolarsky", "--p", "2", "--q", "1", "1", "3"]),
        ("derive_dual.json", &["derive", "--f", "x", "--g", "exp", "--h", "pow(2)", "--at", "1"]),
        ("integrate_elastic.json", &["integrate", "--type", "elastic", "--f", "x/(x-1)", "--interval", "2,3"]),
    ];
    for (file, args) in cases {
        assert_eq!(ok(args), golden(file), "golden mismatch for {file}");
    }
}

#[test]
fn golden_values_are_right() {
    let v = json(&["mean-numbers", "--g", "exp", "1", "2"]);
    let e = std::f64::consts::E;
    assert!((v["value"].as_f64().unwrap() - ((e + e * e) / 2.0).ln()).abs() < 1e-12);
    let v = json(&["stolarsky", "--p", "2", "--q", "1", "1", "3"]);
    assert!((v["value"].as_f64().unwrap() - 26.0 / 12.0).abs() < 1e-12);
    let v = json(&["derive", "--f", "x", "--g", "exp", "--h", "pow(2)", "--at", "1"]);
    assert!((v["value"].as_f64().unwrap() - 2.0 / e).abs() < 1e-8);
    let v = json(&["integrate", "--type", "elastic", "--f", "x/(x-1)", "--interval", "2,3"]);
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn key_sets_are_fixed() {
    let top: BTreeSet<String> = ["value", "class", "flags", "diagnostics"].iter().map(|s| s.to_string()).collect();
    let mf = json(&["mean-function", "--f", "sin(x)", "--g", "id", "--h", "ln", "--interval", "0,pi", "--open-lo", "--open-hi"]);
    assert_eq!(keys(&mf), top);
    assert_eq!(keys(&mf["flags"]), ["generalized", "outside_range"].iter().map(|s| s.to_string()).collect());
    assert_eq!(mf["class"], "I");
    assert!((mf["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let plain_cv = json(&["convexity", "--f", "x^2", "--g", "id", "--h", "id", "--interval", "1,2"]);
    let verified = json(&["convexity", "--f", "x^2", "--g", "id", "--h", "id", "--interval", "1,2", "--verify", "100"]);
    assert_eq!(keys(&plain_cv["flags"]), keys(&verified["flags"]));
    assert!(plain_cv["flags"]["verified"].is_null());

    let pass = json(&["convex-set", "--dim", "1", "--predicate", "x<3", "--g", "ln", "--trials", "200", "--seed", "1", "--region", "0.1,6"]);
    let fail = json(&["convex-set", "--dim", "2", "--predicate", "x+y>2", "--g", "recip", "--trials", "10000", "--seed", "7"]);
    assert_eq!(keys(&pass["flags"]), keys(&fail["flags"]));
    assert_eq!(pass["value"], "pass");
    assert_eq!(fail["value"], "counterexample");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = ["convex-set", "--dim", "2", "--predicate", "x+y>2", "--g", "recip", "--trials", "10000", "--seed", "99"];
    assert_eq!(ok(&a), ok(&a));
    let b = ["convexity", "--f", "exp(x)", "--g", "id", "--h", "ln", "--interval", "0,3", "--verify", "5000", "--seed", "3"];
    assert_eq!(ok(&b), ok(&b));
    let c = ["convex-set", "--dim", "2", "--predicate", "x+y>2", "--g", "recip", "--trials", "10000", "--seed", "100"];
    assert_ne!(ok(&a), ok(&c));
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["--help"]).code, 0);
    assert_eq!(call(&["arith", "--help"]).code, 0);
    assert_eq!(call(&[]).code, 2);
    assert_eq!(call(&["arith", "pow", "--g", "ln", "1"]).code, 2);
    assert_eq!(call(&["mean-function", "--f", "x", "--interval", "1,2,3"]).code, 2);
    assert_eq!(call(&["mean-function", "--f", "x +", "--interval", "1,2"]).code, 2);
    assert_eq!(call(&["arith", "add", "--g", "nosuch", "1", "2"]).code, 2);

    let domain = call(&["arith", "add", "--g", "ln", "-1", "2"]);
    assert_eq!(domain.code, 3);
    assert!(domain.stdout.is_empty());
    assert_eq!(domain.stderr.lines().count(), 1);
    assert!(domain.stderr.starts_with("error: "));
    assert_eq!(call(&["stolarsky", "--p", "1", "--q", "1", "-1", "2"]).code, 3);
}

#[test]
fn interval_literals() {
    let v = plain(&["mean-function", "--f", "sin(x)", "--g", "id", "--h", "ln", "--interval", "pi,0", "--open-lo", "--open-hi"]);
    assert!((v - 0.5).abs() < 1e-6);
    let v = plain(&["mean-function", "--f", "x", "--g", "id", "--h", "ln", "--interval", "0,e", "--open-lo"]);
    assert!((v - 1.0).abs() < 1e-7);
}

#[test]
fn bindings_feed_expressions() {
    let v = plain(&["--let", "k=3", "cauchy-mean", "--f", "x^k", "--g", "x^2", "1", "2"]);
    assert!((v - 14.0 / 9.0).abs() < 1e-9);
    assert_eq!(call(&["--let", "k", "stolarsky", "--p", "1", "--q", "1", "1", "2"]).code, 2);
}

#[test]
fn weighted_numbers_and_negative_operands() {
    let v = plain(&["mean-numbers", "--g", "id", "--weights", "1,3", "0", "4"]);
    assert!((v - 3.0).abs() < 1e-12);
    let v = plain(&["arith", "sub", "--g", "id", "-1", "2"]);
    assert!((v + 3.0).abs() < 1e-12);
}

#[test]
fn plot_writes_congruent_csv() {
    let dir = std::env::temp_dir().join(format!("isoframe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.csv");
    let p = path.to_str().unwrap();
    let v = json(&["plot", "--f", "x", "--g", "ln", "--h", "recip", "--interval", "0.25,4", "--samples", "9", "--out", p]);
    assert_eq!(v["value"], 9);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("label,x,y,u,v"));
    for row in rows {
        let cells: Vec<f64> = row.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
        assert!((cells[2] - cells[0].ln()).abs() < 1e-10);
        assert!((cells[3] - 1.0 / cells[1]).abs() < 1e-10);
    }
    let svg = dir.join("curve.svg");
    ok(&["plot", "--f", "x^2", "--interval", "0,1", "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).ok();
}
