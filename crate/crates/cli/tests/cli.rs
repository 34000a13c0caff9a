use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_braidmetric"))
        .args(args)
        .env_remove("BRAIDMETRIC_MAX_STATES")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn names_prints_the_sequence() {
    let o = run(&["names", "1 2 1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "N(1,2,1) N(1,3,1) N(2,3,1)");
}

#[test]
fn distance_exit_codes() {
    let o = run(&["distance", "1 2 1", "2 1 2"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "exact 1");

    let o = run(&["distance", "1 2", "2 1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not_equivalent");

    let o = run(&["--max-states", "3", "distance", "1 1 2 1 1 2", "2 1 1 2 1 1"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("unknown"));
}

#[test]
fn json_distance_carries_a_witness() {
    let o = run(&["--format", "json", "distance", "1 2 1", "2 1 2", "--witness"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "exact");
    assert_eq!(v["distance"], 1);
    assert_eq!(v["witness"]["moves"][0]["kind"], "hexagon");
}

#[test]
fn lower_bound_json_is_null_for_different_multisets() {
    let o = run(&["--format", "json", "lb", "1 2", "2 1"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["multiset_equal"], false);
    assert!(v["bound"].is_null());
}

#[test]
fn certify_reads_stdin() {
    let derived = run(&["derive", "grid", "--m", "1"], None);
    assert_eq!(derived.status.code(), Some(0));
    let o = run(&["certify", "-"], Some(&stdout(&derived)));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "certified_optimal 4 (bound_match)");
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(64));
    assert_eq!(run(&["names", "1 x 2"], None).status.code(), Some(65));
    assert_eq!(run(&["certify", "/nonexistent/file.json"], None).status.code(), Some(65));
    assert_eq!(run(&["certify", "-"], Some("{\"n\":3}")).status.code(), Some(65));
}

#[test]
fn render_writes_svg_to_stdout() {
    let o = run(&["render", "braid", "1 2 1", "--labels"], None);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert!(svg.contains("<svg xmlns"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("class=\"name-label\"").count(), 3);
}
