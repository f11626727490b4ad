use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brouwerlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    (serde_json::from_slice(&o.stdout).expect("json report"), o.status.code().unwrap())
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("brouwerlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn free_lattice_on_two_generators() {
    let o = run(&["free-lattice", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("size: 6"), "{out}");
    assert!(out.contains("generators: 4"), "{out}");
}

#[test]
fn free_lattice_size_guard() {
    assert_eq!(run(&["free-lattice", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn weak_excluded_middle_fails_on_the_fork() {
    let path = scratch("fork.json");
    assert_eq!(run(&["poset", "show", "fork", "--dump", &path]).status.code(), Some(0));
    let (r, code) = json(&["formula", "valid", "--algebra", &path, "--formula", "~p1 | ~~p1"]);
    assert_eq!(code, 1);
    assert_eq!(r["valid"], false);
    assert_eq!(r["witness"]["p1"], "{l0}");
    assert_eq!(r["value"], "{l0,l1}");
}

#[test]
fn algebra_dump_round_trips() {
    let path = scratch("diamond.json");
    let (built, code) = json(&["algebra", "build", "--poset", "diamond", "--dump", &path]);
    assert_eq!(code, 0);
    assert_eq!(built["size"], 6);
    let text = std::fs::read_to_string(&path).unwrap();
    let again = brouwerlab::brouwer::BrouwerAlgebra::from_json(&text).unwrap();
    assert_eq!(again.to_json(), text);
    let (v, code) = json(&["algebra", "validate", "--algebra", &path]);
    assert_eq!((v["valid"].clone(), code), (serde_json::json!(true), 0));
}

#[test]
fn poset_dump_round_trips() {
    let path = scratch("tree.json");
    run(&["poset", "show", "binary_tree(2)", "--dump", &path]);
    let file: brouwerlab::order::PosetFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.to_poset().unwrap(), brouwerlab::order::binary_tree(2).unwrap());
}

#[test]
fn malformed_input_is_a_usage_error() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\"size\": 2, \"leq\": [[0,1]").unwrap();
    let o = run(&["poset", "validate", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(run(&["formula", "classify", "--formula", "p1 &"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn invalid_poset_fails_the_check() {
    let path = scratch("cycle.json");
    std::fs::write(&path, "{\"size\": 2, \"leq\": [[0,1],[1,0]]}").unwrap();
    assert_eq!(run(&["poset", "validate", &path]).status.code(), Some(1));
}

#[test]
fn pmorphisms() {
    let (r, code) = json(&["pmorphism", "find", "--from", "fork", "--to", "chain(2)", "--onto"]);
    assert_eq!(code, 0);
    assert_eq!(r["map"], serde_json::json!([0, 1, 1]));
    let (r, code) = json(&["pmorphism", "check", "--from", "chain(2)", "--to", "fork", "--map", "0,1"]);
    assert_eq!(code, 1);
    assert_eq!(r["failure"], serde_json::json!(["back", 0, 2]));
}

#[test]
fn kripke_counter_model() {
    let (r, code) = json(&["kripke", "valid", "--frame", "chain(2)", "--formula", "p1 | ~p1"]);
    assert_eq!(code, 1);
    assert_eq!(r["refuting_world"], "0");
    let (r, code) = json(&["kripke", "agree", "--frame", "fork"]);
    assert_eq!(code, 0);
    assert_eq!(r["disagreements"], serde_json::json!([]));
}

#[test]
fn splitting_commands() {
    let (r, code) = json(&["splitting", "witness", "--usl", "boolean(3)", "--downset", "0,1,2,4", "--a", "0", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["c_label"], "{2}");
    let (_, code) = json(&["splitting", "check", "--usl", "boolean(3)", "--downset", "0,1,2,4"]);
    assert_eq!(code, 1);
    let (r, code) = json(&["splitting", "pipeline", "--usl", "boolean(2)", "--downset", "0,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["report"]["pmorphism"], serde_json::json!([0, 1, 2]));
}

#[test]
fn corpus_is_consistent() {
    let (r, code) = json(&["corpus", "run"]);
    assert_eq!(code, 0);
    assert_eq!(r["inconsistent"], serde_json::json!([]));
}

#[test]
fn suite_json_is_independent_of_thread_count() {
    let one = run(&["suite", "--criteria", "1,4,9", "--jobs", "1", "--format", "json"]);
    let many = run(&["suite", "--criteria", "1,4,9", "--jobs", "8", "--format", "json"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn jobs_fall_back_to_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_brouwerlab"))
        .args(["suite", "--criteria", "1"])
        .env("BROUWERLAB_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_brouwerlab"))
        .args(["suite", "--criteria", "1"])
        .env("BROUWERLAB_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
