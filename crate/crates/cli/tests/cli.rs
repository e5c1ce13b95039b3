use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BAD33: &str = r#"{"shape":[3,3],"universe":3,"lists":[[0,1],[0,2],[1,2],[0,1],[0,2],[1,2]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choicelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().last().unwrap_or_else(|| panic!("no output; stderr: {}", String::from_utf8_lossy(&out.stderr)));
    serde_json::from_str(line).expect("json record")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_pairs_is_choosable() {
    let out = run(&["check", "--shape", "2,2", "-k", "2", "--no-timestamps"]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["verdict"], "choosable");
}

#[test]
fn check_grouped_shape_syntax() {
    let out = run(&["check", "--shape", "3*2", "-k", "2", "--no-timestamps"]);
    assert_eq!(code(&out), 0);
    let r = record(&out);
    assert_eq!(r["verdict"], "not-choosable");
    assert_eq!(r["shape"], serde_json::json!([3, 3]));
}

#[test]
fn solve_reports_no_coloring_for_the_k33_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad33.json", BAD33);
    let out = run(&["solve", "--lists", &f]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["verdict"], "no coloring");
}

#[test]
fn hall_and_reduce_on_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad33.json", BAD33);
    let hall = record(&run(&["hall", "--lists", &f]));
    assert_eq!(hall["satisfied"], false);
    let reduce = record(&run(&["reduce", "--lists", &f]));
    assert_eq!(reduce["deficient"]["members"], serde_json::json!([0, 1, 2, 3, 4, 5]));
    assert_eq!(reduce["universe_bound"], true);
}

#[test]
fn replay_prints_coloring_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let lists = r#"{"shape":[3,3,3,1,1],"universe":10,"lists":[[0,1,2,3,4],[0,5,6,7,8],[1,5,9,2,6],[0,1,2,3,4],[5,6,7,8,9],[0,2,4,6,8],[1,3,5,7,9],[0,1,5,6,9],[2,3,4,7,8],[0,1,2,3,4],[5,6,7,8,9]]}"#;
    let f = write(dir.path(), "r.json", lists);
    let out = run(&["replay", "--strategy", "three-triples", "--lists", &f]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = record(&out);
    assert_eq!(r["proper"], true);
    assert_eq!(r["coloring"].as_array().unwrap().len(), 11);
    assert!(!r["trace"].as_array().unwrap().is_empty());
}

#[test]
fn replay_rejects_the_wrong_family() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad33.json", BAD33);
    let out = run(&["replay", "--strategy", "quad-two-triples", "--lists", &f]);
    assert_eq!(code(&out), 3);
}

#[test]
fn invalid_input_exits_3() {
    assert_eq!(code(&run(&["check", "--shape", "0,2", "-k", "2"])), 3);
    assert_eq!(code(&run(&["check", "--shape", "2,2"])), 3);
    assert_eq!(code(&run(&["solve", "--lists", "/nonexistent/file.json"])), 3);
    assert_eq!(code(&run(&["verify", "--suite", "everything"])), 3);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.json", r#"{"shape":[1,1],"universe":1,"lists":[[0],[1]]}"#);
    assert_eq!(code(&run(&["solve", "--lists", &f])), 3);
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = run(&["check", "--shape", "3,3,2", "-k", "3", "--max-assignments", "500", "--no-timestamps"]);
    assert_eq!(code(&out), 2);
    assert_eq!(record(&out)["verdict"], "budget-exhausted");
}

#[test]
fn counterexample_writes_a_list_file_that_solve_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let out = run(&["counterexample", "--shape", "4,2,2,2", "-k", "4", "--out", w.to_str().unwrap(), "--no-timestamps"]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["verdict"], "not-choosable");
    let solved = record(&run(&["solve", "--lists", w.to_str().unwrap()]));
    assert_eq!(solved["verdict"], "no coloring");
}

#[test]
fn output_is_reproducible_without_timestamps() {
    for args in [
        &["check", "--shape", "3,2,2", "-k", "3", "--jobs", "2", "--no-timestamps"][..],
        &["counterexample", "--shape", "3,3", "-k", "2", "--seed", "7", "--no-timestamps"][..],
        &["ch", "--shape", "4,2", "--no-timestamps"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timestamps_present_by_default() {
    let r = record(&run(&["ch", "--shape", "2,2"]));
    assert!(r["timestamp"].as_u64().is_some());
}

#[test]
fn ch_reports_catalog_and_search() {
    let r = record(&run(&["ch", "--shape", "4,2", "--no-timestamps"]));
    assert_eq!(r["choice_number"], "3");
    assert_eq!(r["catalog"]["value"], 3);
}

#[test]
fn cache_records_and_induction() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let c = cache.to_str().unwrap();
    std::fs::write(&cache, "not json\n").unwrap();
    let out = run(&["check", "--shape", "2,2", "-k", "2", "--cache", c, "--no-timestamps"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped corrupt record"));
    let out = run(&["check", "--shape", "2,2,2", "-k", "3", "--cache", c, "--induction", "--no-timestamps"]);
    let r = record(&out);
    assert_eq!(r["verdict"], "choosable");
    assert!(r["stats"]["induction_prunes"].as_u64().unwrap() > 0);
    let lines = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(lines.lines().count(), 3);
}

#[test]
fn induction_requires_a_cache() {
    assert_eq!(code(&run(&["check", "--shape", "2,2", "-k", "2", "--induction"])), 3);
}

#[test]
fn checkpoint_then_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.txt");
    let cp = cp.to_str().unwrap();
    let first = run(&["check", "--shape", "3,2,2", "-k", "3", "--jobs", "2", "--checkpoint", cp, "--no-timestamps"]);
    assert_eq!(code(&first), 0);
    let text = std::fs::read_to_string(cp).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().all(|l| l.starts_with("shard ")));
    let resumed = run(&["check", "--shape", "3,2,2", "-k", "3", "--jobs", "2", "--resume", cp, "--no-timestamps"]);
    let r = record(&resumed);
    assert_eq!(r["verdict"], "choosable");
    assert_eq!(r["stats"]["assignments_tested"], 0);
}

#[test]
fn verify_lemmas_suite_passes() {
    let out = run(&["verify", "--suite", "lemmas", "--no-timestamps"]);
    assert_eq!(code(&out), 0);
    let r = record(&out);
    assert_eq!(r["check"], "reduction-lemmas");
    assert_eq!(r["passed"], true);
}

#[test]
fn catalog_prints_table() {
    let out = run(&["catalog", "--max-n", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("4,2*(k-1)"));
    assert!(text.contains("K_{2*2}"));
}

#[test]
fn bench_reports_two_runs() {
    let r = record(&run(&["bench", "--shape", "2,2,2", "-k", "3", "--jobs", "2", "--no-timestamps"]));
    assert_eq!(r["runs"].as_array().unwrap().len(), 2);
}
