use std::path::PathBuf;
use std::process::Command;

use nilqi::report::Report;
use nilqi::schema::{parse_document, InputDocument};
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn nilqi(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nilqi").chain(args.iter().copied());
    let code = nilqi::run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn report(r: &Run) -> Report {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{}\n{}", e, r.stdout))
}

fn temp_doc(doc: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), serde_json::to_string(doc).unwrap()).unwrap();
    f
}

fn heisenberg_doc(endos: Value) -> Value {
    json!({
        "algebra": {"name": "heisenberg", "dim": 3, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "c": "1"}]}]},
        "endomorphisms": endos
    })
}

#[test]
fn compare_h3_pair_is_quasi_isometric() {
    let r = nilqi(&["compare", &fixture("h3_phi.json"), "--endo", "phi", &fixture("h3_theta.json"), "--endo", "theta"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let Report::Compare(c) = report(&r) else { panic!("wrong report") };
    assert_eq!(c.outcome, "QuasiIsometric");
    assert_eq!(c.powers, Some([1, 1]));
    assert!(c.witness.is_none());
    assert!(c.evidence.iter().any(|e| e.check == "pajf" && e.result == "equivalent"));
}

#[test]
fn validate_reports_triangularity() {
    let r = nilqi(&["validate", &fixture("bad.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("triangularity violation at (1,2,1)"), "{}", r.stderr);
    let Report::Validate(v) = report(&r) else { panic!("wrong report") };
    assert!(!v.valid);
    assert_eq!(v.violations[0].kind, "triangularity");
    assert_eq!((v.violations[0].i, v.violations[0].j, v.violations[0].k), (1, 2, 1));
}

#[test]
fn validate_accepts_heisenberg_and_flags_fourstep_jacobi() {
    let r = nilqi(&["validate", &fixture("heisenberg.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = nilqi(&["validate", &fixture("fourstep.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("ignoring [e9, e9]"), "{}", r.stderr);
    let Report::Validate(v) = report(&r) else { panic!("wrong report") };
    assert!(v.violations.iter().all(|x| x.kind == "jacobi"));
    assert_eq!(v.weights, Some(vec![1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 4]));
    assert_eq!(v.warnings.len(), 1);
}

#[test]
fn pajf_of_fourstep_has_blocks_and_sigma() {
    let r = nilqi(&["pajf", &fixture("fourstep.json"), "--endo", "phi"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let Report::Pajf(p) = report(&r) else { panic!("wrong report") };
    assert_eq!(p.weight_order, "asc");
    assert_eq!(p.blocks.iter().map(|b| b.size).sum::<usize>(), 11);
    let mut sigma = p.sigma.clone();
    sigma.sort_unstable();
    assert_eq!(sigma, (1..=11).collect::<Vec<_>>());
    assert!(p.slot_weights.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(p.matrix.len(), 11);

    let r = nilqi(&["--weight-order", "desc", "pajf", &fixture("fourstep.json"), "--endo", "phi"]);
    let Report::Pajf(q) = report(&r) else { panic!("wrong report") };
    assert_eq!(q.weight_order, "desc");
    assert!(q.slot_weights.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(q.blocks, p.blocks);
}

#[test]
fn rates_and_oracle_agree_on_heisenberg_example() {
    let r = nilqi(&["rates", &fixture("heisenberg.json"), "--endo", "example"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let Report::Rates(rates) = report(&r) else { panic!("wrong report") };
    let mut shown: Vec<&str> = rates.entries.iter().map(|e| e.rate.display.as_str()).collect();
    shown.sort_unstable();
    assert_eq!(shown, ["(4^t)^(1/2)", "2^t", "t*2^t"]);

    let r = nilqi(&["oracle", &fixture("heisenberg.json"), "--endo", "example"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let Report::Oracle(o) = report(&r) else { panic!("wrong report") };
    assert!(o.all_pass);
    assert_eq!(o.checks.len(), 3);
    assert_eq!(o.grid, (10..=40).collect::<Vec<_>>());
}

#[test]
fn backward_rates_invert_the_moduli() {
    let r = nilqi(&["rates", &fixture("heisenberg.json"), "--endo", "example", "--direction", "bwd"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let Report::Rates(rates) = report(&r) else { panic!("wrong report") };
    assert_eq!(rates.direction, "bwd");
    assert!(rates.entries.iter().all(|e| e.rate.base < 1.0));
}

#[test]
fn oracle_csv_is_seeded_and_deterministic() {
    let args = [
        "oracle",
        &fixture("heisenberg.json"),
        "--endo",
        "example",
        "--format",
        "csv",
        "--t-min",
        "1",
        "--t-max",
        "9",
        "--seed",
        "7",
    ];
    let a = nilqi(&args);
    let b = nilqi(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let mut rows = csv::Reader::from_reader(a.stdout.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["vector", "t", "log_norm"]);
    let records: Vec<(usize, u32, f64)> = rows.deserialize().map(Result::unwrap).collect();
    // Thinning keeps at least 8 points per vector.
    assert_eq!(records.len(), 3 * 8);
    let c = nilqi(&["oracle", &fixture("heisenberg.json"), "--endo", "example", "--format", "csv", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn csv_is_only_for_oracle() {
    let r = nilqi(&["--format", "csv", "pajf", &fixture("heisenberg.json"), "--endo", "example"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("only available for oracle"));
}

#[test]
fn every_report_round_trips() {
    let h = fixture("heisenberg.json");
    let f = fixture("fourstep.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", &f],
        vec!["validate", &h],
        vec!["weights", &f],
        vec!["jordan", &h, "--endo", "rotation"],
        vec!["jordan", &f, "--endo", "theta"],
        vec!["pajf", &h, "--endo", "rotation"],
        vec!["rates", &h, "--endo", "rotation"],
        vec!["growth", &f, "--endo", "phi"],
        vec!["compare", &f, "--endo", "phi", &f, "--endo", "theta"],
        vec!["oracle", &h, "--endo", "shear", "--seed", "1"],
    ];
    for args in runs {
        let r = nilqi(&args);
        assert!(r.code <= 1, "{:?}: {}", args, r.stderr);
        let emitted: Value = serde_json::from_str(&r.stdout).unwrap();
        let parsed: Report = serde_json::from_value(emitted.clone()).unwrap_or_else(|e| panic!("{:?}: {}", args, e));
        assert_eq!(serde_json::to_value(&parsed).unwrap(), emitted, "{:?}", args);
    }
}

#[test]
fn input_documents_round_trip() {
    for name in ["heisenberg.json", "h3_phi.json", "h3_theta.json", "fourstep.json", "bad.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc = parse_document(&text).unwrap();
        let again: InputDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again, "{}", name);
    }
}

#[test]
fn schema_errors_exit_with_parse_code() {
    let cases = [
        json!({"algebra": {"name": "g", "dim": 2, "brackets": [], "colour": "red"}}),
        json!({"algebra": {"name": "g", "dim": 3, "brackets": [{"i": 2, "j": 1, "terms": [{"k": 3, "c": "1"}]}]}}),
        json!({"algebra": {"name": "g", "dim": 3, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 4, "c": "1"}]}]}}),
        json!({"algebra": {"name": "g", "dim": 3, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "c": "1/0"}]}]}}),
        json!({"algebra": {"name": "g", "dim": 3, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "c": "x"}]}]}}),
    ];
    for doc in cases {
        let f = temp_doc(&doc);
        let r = nilqi(&["validate", f.path().to_str().unwrap()]);
        assert_eq!(r.code, 2, "{}: {}", doc, r.stderr);
        assert!(r.stderr.starts_with("error: parse error"), "{}", r.stderr);
    }
    assert_eq!(nilqi(&["validate", "/nonexistent/doc.json"]).code, 2);
    assert_eq!(nilqi(&["frobnicate"]).code, 2);
}

#[test]
fn endomorphism_errors() {
    let f = temp_doc(&heisenberg_doc(json!({
        "both": {"matrix": [["2", "0", "0"], ["0", "2", "0"], ["0", "0", "4"]], "base_action": [["2", "0"], ["0", "2"]]},
        "short": {"base_action": [["2", "0", "0"]]},
        "ints": {"matrix": [[2, 0, 0], [0, 3, 0], [0, 0, 6]]}
    })));
    let p = f.path().to_str().unwrap();
    assert_eq!(nilqi(&["jordan", p, "--endo", "both"]).code, 2);
    assert_eq!(nilqi(&["jordan", p, "--endo", "short"]).code, 2);
    let r = nilqi(&["jordan", p, "--endo", "missing"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("available: both, ints, short"), "{}", r.stderr);
    assert_eq!(nilqi(&["jordan", p, "--endo", "ints"]).code, 0);
}

#[test]
fn assumption_failures_exit_one() {
    let f = temp_doc(&heisenberg_doc(json!({
        "anosov": {"base_action": [["2", "1"], ["1", "1"]]},
        "skew": {"matrix": [["2", "0", "0"], ["0", "2", "0"], ["0", "0", "5"]]}
    })));
    let p = f.path().to_str().unwrap();
    let r = nilqi(&["compare", p, p, "--endo", "anosov"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("nonsurjective"), "{}", r.stderr);
    let r = nilqi(&["compare", p, p, "--endo", "skew"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("homomorphism"), "{}", r.stderr);
    let r = nilqi(&["validate", p]);
    assert_eq!(r.code, 1);
    let Report::Validate(v) = report(&r) else { panic!("wrong report") };
    assert_eq!(v.errors.len(), 2);
}

#[test]
fn power_search_bound_controls_decision() {
    let f = temp_doc(&heisenberg_doc(json!({
        "e": {"matrix": [["3", "-1", "0"], ["1", "1", "0"], ["1", "0", "4"]]},
        "e2": {"matrix": [["8", "-4", "0"], ["4", "0", "0"], ["7", "-1", "16"]]}
    })));
    let p = f.path().to_str().unwrap();
    let r = nilqi(&["compare", p, "--endo", "e", p, "--endo", "e2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let Report::Compare(c) = report(&r) else { panic!("wrong report") };
    assert_eq!(c.powers, Some([2, 1]));

    let r = nilqi(&["--power-bound", "1", "compare", p, "--endo", "e", p, "--endo", "e2"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let Report::Compare(c) = report(&r) else { panic!("wrong report") };
    assert_eq!(c.outcome, "Unknown");
}

#[test]
fn high_degree_eigenvalues_are_unsupported() {
    // Companion matrix of x^9 - 3 on an abelian algebra.
    let mut m = vec![vec!["0".to_string(); 9]; 9];
    for i in 0..8 {
        m[i + 1][i] = "1".into();
    }
    m[0][8] = "3".into();
    let f = temp_doc(&json!({
        "algebra": {"name": "r9", "dim": 9, "brackets": []},
        "endomorphisms": {"c": {"matrix": m}}
    }));
    let r = nilqi(&["jordan", f.path().to_str().unwrap(), "--endo", "c"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("unsupported eigenvalue"), "{}", r.stderr);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nilqi");
    let out = Command::new(bin)
        .args(["compare", &fixture("h3_phi.json"), "--endo", "phi", &fixture("h3_theta.json"), "--endo", "theta"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(matches!(r, Report::Compare(c) if c.outcome == "QuasiIsometric"));

    let out = Command::new(bin).args(["validate", &fixture("bad.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("triangularity"));
}
