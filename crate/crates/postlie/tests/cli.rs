use std::path::PathBuf;
use std::process::Command;

use postlie::cli::run;
use postlie::structures::Structure;
use postlie_core::magnus::chi_lie;
use postlie_core::{Rational, Scalar, Sign, Vector};
use serde_json::Value;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn postlie(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("postlie").chain(args.iter().copied()), &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.out).unwrap_or_else(|e| panic!("{e}: {}", o.out))
}

#[test]
fn check_algebra_examples() {
    assert_eq!(postlie(&["check-algebra", "--builtin", "sl2"]).code, 0);
    let gl3 = postlie(&["check-algebra", "--builtin", "gl(3)"]);
    assert_eq!(gl3.code, 0);
    assert!(gl3.out.contains("realization: 3x3"), "{}", gl3.out);
    assert_eq!(postlie(&["check-algebra", "--algebra", &data("sl2.json")]).code, 0);

    let corrupt = postlie(&["check-algebra", "--algebra", &data("sl2_corrupt.json")]);
    assert_eq!(corrupt.code, 1);
    assert!(corrupt.err.contains("JacobiViolation"), "{}", corrupt.err);

    let report = json(&postlie(&["check-algebra", "--builtin", "so3", "--json", "--mode", "float"]));
    assert_eq!(report["dim"], 3);
    assert_eq!(report["ok"], true);
}

#[test]
fn check_rmatrix_examples() {
    for s in Structure::ALL {
        let o = postlie(&["check-rmatrix", "--builtin", s.name()]);
        assert_eq!(o.code, 0, "{s}: {}", o.err);
    }
    let sl2 = data("sl2.json");
    let split = postlie(&["check-rmatrix", "--algebra", &sl2, "--splitting", &data("sl2_borel_split.json"), "--json"]);
    assert_eq!(split.code, 0);
    let report = json(&split);
    assert_eq!((report["dim_im_plus"].as_u64(), report["dim_im_minus"].as_u64()), (Some(2), Some(1)));
    assert_eq!(postlie(&["check-rmatrix", "--algebra", &sl2, "--rmatrix", &data("identity_r.json")]).code, 0);

    let bad = postlie(&["check-rmatrix", "--algebra", &sl2, "--splitting", &data("sl2_bad_split.json")]);
    assert_eq!(bad.code, 1);
    assert!(bad.err.contains("NotASubalgebra"), "{}", bad.err);
    let not_r = postlie(&["check-rmatrix", "--algebra", &sl2, "--rmatrix", &data("not_an_r.json")]);
    assert_eq!(not_r.code, 1);
    assert!(not_r.out.contains("FAILED"));
}

#[test]
fn check_postlie_examples() {
    for s in Structure::ALL {
        let o = postlie(&["check-postlie", "--builtin", s.name()]);
        assert_eq!(o.code, 0, "{s}: {}", o.out);
        assert_eq!(o.out.matches("derived bracket: ok").count(), 2);
    }
    let abelian = data("abelian2.json");
    assert_eq!(postlie(&["check-postlie", "--algebra", &abelian, "--product", &data("associative2.json")]).code, 0);
    let bad = postlie(&["check-postlie", "--algebra", &abelian, "--product", &data("not_prelie2.json"), "--json"]);
    assert_eq!(bad.code, 1);
    assert_eq!(json(&bad)["checks"][0]["ok"], false);
    assert_eq!(postlie(&["check-postlie", "--algebra", &abelian, "--product", &data("missing.json")]).code, 2);
}

#[test]
fn magnus_matches_the_golden_file() {
    let golden = include_str!("golden/magnus_sl2_borel_n5.txt");
    let o = postlie(&["magnus", "--builtin", "sl2-borel", "--x", "1,-1/2,2", "--order", "5"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.out, golden);
    // the golden coefficients agree with the Lie-level solver
    let ctx = Structure::Sl2Borel.context::<Rational>().unwrap();
    let x = Vector::new(vec![Rational::from_i64(1), Rational::from_ratio(-1, 2), Rational::from_i64(2)]);
    let chi = chi_lie(&ctx.post_tensor(Sign::Minus), ctx.derived_algebra(), &x, 5).unwrap();
    assert!(golden.ends_with(&chi.render()));
}

#[test]
fn magnus_examples() {
    let id = postlie(&["magnus", "--builtin", "sl2-identity", "--x", "1,2,3", "--order", "4", "--json"]);
    let orders = json(&id)["orders"].clone();
    assert_eq!(orders[1], serde_json::json!(["1", "2", "3"]));
    assert!((2..=4).all(|m| orders[m] == serde_json::json!(["0", "0", "0"])));

    // an idempotent direction of an associative product: χ = log(1 + t) x
    let o = postlie(&["magnus", "--algebra", &data("abelian2.json"), "--product", &data("associative2.json"), "--x", "1,1", "--order", "4"]);
    assert!(o.out.contains("t^3: [1/3, 1/3]") && o.out.contains("t^4: [-1/4, -1/4]"), "{}", o.out);

    let exact = json(&postlie(&["magnus", "--builtin", "gl2-split", "--x", "1/2,-1,1/4,2", "--order", "5", "--json"]));
    let float = json(&postlie(&["magnus", "--builtin", "gl2-split", "--x", "0.5,-1,0.25,2", "--order", "5", "--json", "--mode", "float"]));
    for m in 0..=5 {
        for k in 0..4 {
            let q = postlie_core::scalar::parse_rational(exact["orders"][m][k].as_str().unwrap()).unwrap();
            let f = float["orders"][m][k].as_f64().unwrap();
            assert!((q.to_f64() - f).abs() < 1e-12);
        }
    }
    assert_eq!(postlie(&["magnus", "--builtin", "sl2-borel", "--x", "1,2"]).code, 2);
    assert_eq!(postlie(&["magnus", "--x", "1,2,3"]).code, 2);
}

#[test]
fn factorize_examples() {
    let id = json(&postlie(&["factorize", "--builtin", "sl2-identity", "--x", "0.3,-0.2,0.5", "--order", "6", "--json"]));
    assert!(id["residual"].as_f64().unwrap() < 1e-14);
    let residual =
        |n: &str| json(&postlie(&["factorize", "--builtin", "gl2-split", "--x", "0,0.5,0,0.5", "--order", n, "--json"]))["residual"].as_f64().unwrap();
    assert!(residual("4") / residual("8") > 50.0);
    let o = postlie(&["factorize", "--builtin", "sl2-borel", "--x", "0.3,0,0.3", "--order", "10"]);
    assert!(o.out.contains("N = 10") && o.out.contains("N = 9"));
    assert_eq!(postlie(&["factorize", "--builtin", "sl2-borel", "--x", "1,0,1", "--mode", "exact"]).code, 2);
}

#[test]
fn flow_writes_csv() {
    let o = postlie(&["flow", "--diag", "0.3,-0.5,0.8,-0.1", "--offdiag", "0.6,-0.4,0.9", "--order", "10", "--restart", "0.05", "--rk4-step", "0.001"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let mut reader = csv::Reader::from_reader(o.out.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.len(), 1 + 16 + 8 + 4 + 2);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 21);
    let drift: f64 = rows.iter().map(|r| r[header.len() - 2].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(drift < 1e-8);
    assert!(o.err.contains("largest gap to RK4"), "{}", o.err);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("flow.csv");
    let o = postlie(&["flow", "--builtin", "sl2-borel", "--x", "0.2,0.1,0.3", "--order", "8", "--steps", "4", "--output", file.to_str().unwrap(), "--json"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(std::fs::read_to_string(&file).unwrap().lines().count(), 6);
    assert_eq!(json(&o)["points"], 5);
}

#[test]
fn flow_flags_non_convergence_and_bad_input() {
    let o = postlie(&["flow", "--diag", "0,0", "--offdiag", "1", "--order", "7", "--t1", "4", "--steps", "2"]);
    assert_eq!(o.code, 0);
    assert!(o.err.contains("NonConvergentSeries"), "{}", o.err);
    assert_eq!(postlie(&["flow", "--mode", "exact", "--diag", "0,0", "--offdiag", "1"]).code, 2);
    assert_eq!(postlie(&["flow", "--diag", "0,0"]).code, 2);
    assert_eq!(postlie(&["flow", "--diag", "0,0,0", "--offdiag", "1"]).code, 2);
    assert_eq!(postlie(&["flow", "--algebra", &data("sl2_corrupt.json"), "--x", "1,0,0"]).code, 1);
}

#[test]
fn bell_counts() {
    for (n, count) in [("1", "1"), ("3", "5"), ("6", "203")] {
        let o = postlie(&["bell", "--n", n]);
        assert_eq!((o.code, o.out.trim()), (0, count));
    }
    assert_eq!(json(&postlie(&["bell", "--n", "4", "--json"]))["terms"], 15);
    assert_eq!(postlie(&["bell", "--n", "0"]).code, 2);
    assert_eq!(postlie(&["bell", "--n", "3", "--mode", "float"]).code, 2);
}

#[test]
fn hopf_suite_is_seeded() {
    let a = postlie(&["hopf-suite", "--cases", "8", "--seed", "11"]);
    assert_eq!(a.code, 0, "{}", a.out);
    assert!(a.out.starts_with("seed 11"));
    assert_eq!(a.out, postlie(&["hopf-suite", "--cases", "8", "--seed", "11"]).out);
    let report = json(&postlie(&["hopf-suite", "--cases", "4", "--builtin", "gl2-split", "--json"]));
    assert_eq!(report["ok"], true);
    assert_eq!(report["suites"][1]["cases"], 4);
}

#[test]
fn usage_errors() {
    assert_eq!(postlie(&["bogus"]).code, 2);
    assert_eq!(postlie(&["magnus"]).code, 2);
    assert_eq!(postlie(&["check-algebra", "--builtin", "e8"]).code, 2);
    let help = postlie(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("hopf-suite"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_postlie");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["bell", "--n", "3"]), Some(0));
    assert_eq!(status(&["check-algebra", "--algebra", &data("sl2_corrupt.json")]), Some(1));
    assert_eq!(status(&["check-algebra"]), Some(2));
}
