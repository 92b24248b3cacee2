use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrapframe"))
        .args(args)
        .env("WRAPFRAME_COLOR", "never")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn f(rel: &str) -> String {
    fixture(rel).display().to_string()
}

#[test]
fn minmodel_writes_one_file_per_model() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["minmodel", &f("abstr.avl"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["model-1.json", "model-2.json"]);
}

#[test]
fn minmodel_of_top_has_no_model() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("top.avl");
    std::fs::write(&p, "TOP").unwrap();
    let o = run(&["minmodel", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no labelled content"));
}

#[test]
fn minmodel_of_a_determiner_entry_has_no_model() {
    let o = run(&["minmodel", &f("stroking/every.avl")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no content forced into wrapping"));
}

#[test]
fn minmodel_mary_gives_one_model() {
    let o = run(&["minmodel", &f("mary.avl")]);
    assert_eq!(o.status.code(), Some(0));
    let m = wrapframe::json::from_json(&stdout(&o)).unwrap();
    assert_eq!(m.node_count(), 3);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["minmodel", &f("abstr.avl")]);
    let b = run(&["minmodel", &f("abstr.avl")]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["pipeline", &f("stroking/derivation.toml")]);
    let b = run(&["pipeline", &f("stroking/derivation.toml")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn subsumption_exit_codes() {
    let bottom = f("figures/hom-bottom.json");
    let top = f("figures/hom-top.json");
    assert_eq!(run(&["subsumes", &bottom, &top]).status.code(), Some(0));
    assert_eq!(run(&["subsumes", &top, &bottom]).status.code(), Some(1));
    assert_eq!(run(&["subsumes", &top, &top]).status.code(), Some(0));
    assert_eq!(run(&["iso", &top, &top]).status.code(), Some(0));
    assert_eq!(run(&["iso", &bottom, &top]).status.code(), Some(1));
}

#[test]
fn unify_reproduces_the_merged_frame() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "unify",
        &f("figures/mary-sees-john.json"),
        &f("figures/john-is-tall.json"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("unified.json");
    assert_eq!(run(&["iso", out.to_str().unwrap(), &f("figures/mary-sees-tall-john.json")]).status.code(), Some(0));
}

#[test]
fn pipeline_reports_readings_and_verdicts() {
    let o = run(&["pipeline", &f("bark-dog/derivation.toml"), "--emit", "gqt"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("1 reading(s)"));
    assert!(s.starts_with("combination [0,0,0]"));
    assert!(s.contains("every(u0, "));
    assert!(s.contains("instance: true"));

    let o = run(&["pipeline", &f("bark-dog/derivation.toml"), "--instance", &f("bark-dog/one-silent-dog.json")]);
    assert!(stdout(&o).contains("instance: false"));

    let o = run(&["pipeline", &f("stroking/derivation.toml"), "--max-readings", "1"]);
    let s = stdout(&o);
    assert!(s.contains("2 reading(s)"));
    assert!(s.contains("reading 1:") && !s.contains("reading 2:"));
}

#[test]
fn solve_and_transcribe() {
    let o = run(&["solve", &f("stroking/complex.json"), "--emit", "gqt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = run(&["transcribe", &f("stroking/complex.json"), "--emit", "smt", "--max-readings", "1"]);
    let s = stdout(&o);
    assert!(s.starts_with("(set-logic UF)"));
    assert!(s.contains("(forall ((u1 E))") || s.contains("(forall ((u0 E))"));

    let o = run(&["solve", &f("donkey/complex.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_against_instances() {
    let cx = f("stroking/complex.json");
    let o = run(&["check", &cx, "--instance", &f("bark-dog/two-barking-dogs.json")]);
    // No student: the existential reading fails, the universal one holds vacuously.
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "reading 1: false\nreading 2: true\nfalse\n");

    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, run(&["minmodel", &f("mary.avl")]).stdout).unwrap();
    let m = m.to_str().unwrap();
    assert_eq!(run(&["check", m, "--formula", &f("mary.avl")]).status.code(), Some(0));
    assert_eq!(run(&["check", m, "--formula", &f("abstr.avl")]).status.code(), Some(1));
}

#[test]
fn dot_and_fol() {
    let o = run(&["dot", &f("figures/walker.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("digraph"));

    let o = run(&["fol", &f("abstr.avl"), "--axioms", "2"]);
    let s = stdout(&o);
    assert!(s.contains("forall u, w, w2. ((P(u, w) & P(u, w2)) -> w = w2)"));

    let o = run(&["fol", &f("abstr.avl"), "--emit", "json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["dot", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["minmodel", &f("abstr.avl"), "--emit", "xml"]).status.code(), Some(2));
    let o = run(&["check", &f("stroking/complex.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_corpus_collects_models() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let o = run(&["--seed-corpus", corpus.to_str().unwrap(), "minmodel", &f("abstr.avl")]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> =
        std::fs::read_dir(&corpus).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["minmodel-0.json", "minmodel-1.json"]);
}
