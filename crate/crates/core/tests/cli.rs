use std::process::Command;

use normcheck::cli::run;

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn normcheck(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("normcheck").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const PARADOX_GOLDEN: &str = "\
norms:
  norm prohA: forbidden A compensated-by B
  norm permA: permitted A if C
  norm prohD: forbidden D
  norm permD: permitted D if permitted(A)
  override permA > prohA
  override permD > prohD
compiled formulas:
  N1  !C -> !A (+) B
  N2  C -> F A
  N3  G !A -> G !D
  N4  F A -> F D
temporal reading (bounds 4,4):
  state t0: holds (2 lassos, exhaustive)
  state t1: holds (3 lassos, exhaustive)
  state t2: holds (4 lassos, exhaustive)
  state tl: holds (5 lassos, exhaustive)
  satisfied at every state
deontic reading of prefix: t0 t1 t2 ; loop: tl:
  trace: prefix: {} {A,D} {B} ; loop: {}
  status: non-compliant
  prohA violated at 1, compensated at 2
  prohD violated at 1, not compensated
DISCREPANCY: yes
";

#[test]
fn demo_paradox_golden() {
    let (code, out, err) = normcheck(&["demo", "paradox"]);
    assert_eq!(code, 1);
    assert_eq!(out, PARADOX_GOLDEN);
    assert!(err.is_empty());
}

#[test]
fn demo_paradox_structured() {
    let (code, out, _) = normcheck(&["--format", "structured", "demo", "paradox"]);
    assert_eq!(code, 1);
    assert_eq!(
        out,
        concat!(
            r#"{"record":"paradox","ltl_satisfied":true,"path":"prefix: t0 t1 t2 ; loop: tl","#,
            r#""trace":"prefix: {} {A,D} {B} ; loop: {}","status":"non-compliant","violations":["#,
            r#"{"norm":"prohA","position":1,"compensated":true,"compensation_position":2},"#,
            r#"{"norm":"prohD","position":1,"compensated":false,"compensation_position":null}],"#,
            r#""discrepancy":true}"#,
            "\n"
        )
    );
}

#[test]
fn check_privacy_system() {
    let (code, out, _) = normcheck(&[
        "check",
        "--ts",
        &data("privacy.ts"),
        "--norms",
        &data("privacy.norms"),
        "--bounds",
        "4,4",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("N1  !C -> !A (+) B\n"));
    assert!(out.ends_with("satisfied at every checked state\n"));
}

#[test]
fn check_single_state_with_failure() {
    let dir = std::env::temp_dir().join(format!("normcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let formulas = dir.join("f.ltl");
    std::fs::write(&formulas, "# never A\nG !A\nF !A\n").unwrap();
    let (code, out, _) = normcheck(&[
        "check",
        "--ts",
        &data("privacy.ts"),
        "--formulas",
        formulas.to_str().unwrap(),
        "--state",
        "t0",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("state t0: fails"), "{out}");
    assert!(
        out.contains("counterexample: prefix: t0 t1 t2 ; loop: tl"),
        "{out}"
    );
    assert!(out.contains("failing: F1\n"), "{out}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn classify_scenario_trace() {
    let (code, out, _) = normcheck(&[
        "classify",
        "--trace",
        "prefix: {} {A,D} {B} ; loop: {}",
        "--norms",
        &data("privacy.norms"),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("status: non-compliant\n"));
    assert!(out.contains("violation: prohD at 1, not compensated\n"));
    assert!(out.contains("violation: prohA at 1, compensated at 2\n"));
}

#[test]
fn classify_weak_compliance_exits_zero() {
    let (code, out, _) = normcheck(&[
        "classify",
        "--trace",
        "prefix: {} {A} {B} ; loop: {}",
        "--norms",
        &data("privacy.norms"),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("status: weakly-compliant\n"));
}

#[test]
fn classify_path_through_system() {
    let (code, out, _) = normcheck(&[
        "classify",
        "--trace-file",
        &data("privacy.path"),
        "--ts",
        &data("privacy.ts"),
        "--norms",
        &data("privacy.norms"),
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("trace: prefix: {} {A,D} {B} ; loop: {}\n"));
}

#[test]
fn eval_exit_codes() {
    let t = "prefix: {} {A,D} {B} ; loop: {}";
    assert_eq!(
        normcheck(&["eval", "--formula", "F A -> F D", "--trace", t]).0,
        0
    );
    assert_eq!(
        normcheck(&["eval", "--formula", "G !A", "--trace", t]),
        (1, "false\n".into(), String::new())
    );
}

#[test]
fn rewrite_naive_set() {
    let (code, out, _) = normcheck(&[
        "rewrite",
        "--conditionals",
        &data("naive.conditionals"),
        "--overrides",
        &data("naive.overrides"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "!C -> G !A\nG !A & A -> G B\nC -> F A\n!F A -> G !D\nF A -> F D\n"
    );
}

#[test]
fn oracle_subcommands() {
    let (code, out, _) = normcheck(&[
        "oracle", "equiv", "--f", "F a", "--g", "true U a", "--props", "a",
    ]);
    assert_eq!(
        (code, out.as_str()),
        (0, "equivalent: yes (90 traces, bounds 3,2)\n")
    );
    let (code, out, _) = normcheck(&[
        "oracle", "equiv", "--f", "G a", "--g", "F a", "--props", "a",
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("equivalent: no\ncounterexample: "));
    let (code, _, _) = normcheck(&[
        "oracle",
        "sat",
        "--f",
        "G !A & F A",
        "--props",
        "A",
        "--bounds",
        "3,3",
    ]);
    assert_eq!(code, 1);
    let (code, out, _) = normcheck(&[
        "--format",
        "structured",
        "oracle",
        "sat",
        "--f",
        "F A",
        "--props",
        "A",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with(
        r#"{"record":"sat","f":"F A","bounds":{"max_prefix":3,"max_loop":2},"satisfiable":true,"#
    ));
}

#[test]
fn table1_output_independent_of_jobs() {
    let args = ["oracle", "table1", "--bounds", "2,1"];
    let (code, serial, _) = normcheck(&args);
    assert_eq!(code, 0);
    assert!(serial.contains("rows confirmed: 5/5\n"));
    let mut par = vec!["--jobs", "4"];
    par.extend(args);
    assert_eq!(normcheck(&par).1, serial);
}

#[test]
fn table1_records_file() {
    let path = std::env::temp_dir().join(format!("normcheck-table1-{}.jsonl", std::process::id()));
    let (code, _, _) = normcheck(&[
        "oracle",
        "table1",
        "--bounds",
        "1,1",
        "--records",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(body.lines().count(), 5);
    assert!(body.starts_with(
        r#"{"minimal_set":"C","pattern":"C at every position","expected":"compliant","#
    ));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(normcheck(&[]).0, 2);
    assert_eq!(normcheck(&["frobnicate"]).0, 2);
    let (code, _, err) = normcheck(&["eval", "--formula", "a ⊗ b", "--trace", "loop: {a}"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: unknown operator"), "{err}");
    let (code, _, err) = normcheck(&[
        "check",
        "--ts",
        "/nonexistent.ts",
        "--norms",
        &data("privacy.norms"),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read /nonexistent.ts"));
    assert_eq!(
        normcheck(&["eval", "--formula", "a", "--trace", "prefix: s ; loop: s"]).0,
        2
    );
    assert_eq!(
        normcheck(&["oracle", "equiv", "--f", "a", "--g", "b", "--props", "a"]).0,
        2
    );
    assert_eq!(
        normcheck(&["oracle", "sat", "--f", "a", "--props", "a", "--bounds", "3,0"]).0,
        2
    );
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = normcheck(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("classify"));
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_normcheck");
    let once = || {
        Command::new(bin)
            .args(["--format", "structured", "demo", "paradox"])
            .output()
            .unwrap()
    };
    let (a, b) = (once(), once());
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        String::from_utf8(a.stdout).unwrap(),
        normcheck(&["--format", "structured", "demo", "paradox"]).1
    );
}
