use std::path::Path;
use std::process::{Command, Output};

use forriqp_core::circuits::odd_circuit;
use forriqp_core::forrelation::BooleanFunction;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_forriqp"));
    c.env_remove("FORRIQP_MAX_QUBITS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn phi_of_constant_functions() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.txt", "++++++++\n");
    let o = run(&["phi", &c, &c]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["phi"].as_f64().unwrap(), 0.353553390593);
    assert_eq!(v["phi_sq"].as_f64().unwrap(), 0.125);
    assert_eq!(v["n"], 3);

    let o = run(&["--format", "csv", "phi", &c, &c]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("phi,phi_odd,phi_even,phi_sq"));
    assert_eq!(lines.next(), Some("0.353553390593,0.353553390593,0,0.125"));
}

#[test]
fn phi_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "++++++++\n");
    let b = write(dir.path(), "b.txt", "+-+-\n");
    let o = run(&["phi", &a, &b]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains('8') && e.contains('4'), "{e}");

    let bad = write(dir.path(), "bad.txt", "++x+\n");
    let o = run(&["phi", &bad, &bad]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("bad.txt") && e.contains("line 1, column 3"), "{e}");

    assert_eq!(run(&["phi"]).status.code(), Some(2));
    assert_eq!(run(&["phi", "--bogus"]).status.code(), Some(2));
}

#[test]
fn phi_of_sampled_pair_is_seeded() {
    let a = run(&["--seed", "9", "phi", "--n", "6", "--source", "forrelated"]);
    let b = run(&["--seed", "9", "phi", "--n", "6", "--source", "forrelated"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert!(v["phi"].as_f64().unwrap() > 0.3);
}

#[test]
fn simulate_zero_phase() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"m": 2, "phases": {"pm1": "++++"}}"#);
    let o = run(&["simulate", &c]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let d: Vec<f64> = v["distribution"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(d, vec![1.0, 0.0, 0.0, 0.0]);

    let angles = write(dir.path(), "a.json", r#"{"m": 1, "phases": {"angles": [0, 3.141592653589793]}}"#);
    let v: Value = serde_json::from_slice(&run(&["simulate", &angles]).stdout).unwrap();
    assert_eq!(v["distribution"][1].as_f64().unwrap(), 1.0);
}

#[test]
fn simulate_odd_forrelation_circuit() {
    let c = BooleanFunction::constant(3, 1).unwrap();
    let circ = odd_circuit(&c, &c).unwrap();
    let signs: String = circ
        .circuit()
        .diagonal()
        .entries()
        .iter()
        .map(|z| if z.re > 0.0 { '+' } else { '-' })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "odd.json", &format!(r#"{{"m": 4, "phases": {{"pm1": "{signs}"}}}}"#));
    let o = run(&["simulate", &path, "--accept", "forrelation-odd"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["acceptance"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn simulate_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(dir.path(), "s.json", r#"{"m": 3, "phases": {"pm1": "++++"}}"#);
    let o = run(&["simulate", &short]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/phases/pm1"));

    let nan = write(dir.path(), "n.json", r#"{"m": 1, "phases": {"angles": [0, "pi"]}}"#);
    let o = run(&["simulate", &nan]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/phases/angles/1"));

    let big = write(dir.path(), "b.json", r#"{"m": 6, "phases": {"pm1": "+-"}}"#);
    let o = bin().args(["simulate", &big]).env("FORRIQP_MAX_QUBITS", "4").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("limit of 4"));
}

#[test]
fn simulate_samples_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"m": 2, "phases": {"angles": [0, 1, 2, 3]}}"#);
    let a = run(&["--seed", "4", "simulate", &c, "--samples", "50", "--accept", "first-zero"]);
    let b = run(&["--seed", "4", "simulate", &c, "--samples", "50", "--accept", "first-zero"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["samples"].as_array().unwrap().len(), 50);
    assert_eq!(v["rng"], "splitmix64-ctr/v1");
}

#[test]
fn distinguish_is_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = run(&[
            "--seed", "12", "--out", out.to_str().unwrap(),
            "distinguish", "--n", "5", "--trials", "400", "--instances", "4",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["sources"].as_array().unwrap().len(), 2);
    assert!(v["accuracy"].as_f64().is_some());

    let o = run(&["--seed", "13", "distinguish", "--n", "5", "--trials", "400", "--instances", "4"]);
    assert_ne!(o.stdout, ta);
}

#[test]
fn distinguish_validation() {
    assert_eq!(run(&["distinguish", "--n", "4", "--circuit", "odd"]).status.code(), Some(2));
    assert_eq!(run(&["distinguish", "--n", "4", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["distinguish", "--n", "4", "--source", "files"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.txt", "++++++++\n");
    let o = run(&[
        "--format", "csv", "distinguish", "--n", "3", "--trials", "100", "--source", "files", "--f", &c, "--g", &c,
        "--circuit", "combined",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("source,instances,trials_per_instance,mean_acceptance"));
    assert!(text.lines().nth(1).unwrap().starts_with("files,1,100,"));
}

#[test]
fn verify_suites_print_their_lines() {
    let o = run(&["verify", "identities"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "q-identity n≤10: PASS"));

    let o = run(&["verify", "circuits"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("thm1 odd n=7: PASS max|err| = ")).unwrap();
    let err: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err <= 1e-10);

    let o = run(&["verify", "growth"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "bound tight at |F|=1,n=1: PASS slack 0"));

    let o = run(&["--format", "json", "verify", "growth"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failed"], 0);
}

#[test]
fn growth_audit_report() {
    let o = run(&["growth-audit", "--recipe", "odd", "--n", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["degree_profile", "l1", "levels", "F_size", "bound", "pass", "slack"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["l1"].as_f64().unwrap(), 1.5);
    assert_eq!(v["F_size"], 8);

    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"n_orc": 1, "w": 0, "phases": {"angles": [0, 0]}, "accept": "zero"}"#,
    );
    let v: Value = serde_json::from_slice(&run(&["growth-audit", &spec]).stdout).unwrap();
    assert_eq!(v["l1"].as_f64().unwrap(), 1.0);
    assert!(v["slack"].as_f64().unwrap().abs() <= 1e-10);

    assert_eq!(run(&["growth-audit", "--recipe", "odd", "--n", "2"]).status.code(), Some(2));
    let o = run(&["--seed", "3", "growth-audit", "--random", "--n-orc", "3", "--w", "1"]);
    assert!(o.status.success());
}
