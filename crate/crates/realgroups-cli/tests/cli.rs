//! End-to-end tests of the command-line interface: record counts, exit
//! codes, and byte stability of the output.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_realgroups"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.as_mut().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout_lines(o: &Output) -> Vec<String> {
    String::from_utf8_lossy(&o.stdout).lines().map(|s| s.to_string()).collect()
}

#[test]
fn kgb_record_counts() {
    let sc = run(&["kgb", "--group", "A1", "--isogeny", "sc", "--inner", "c"]);
    assert!(sc.status.success());
    assert_eq!(stdout_lines(&sc).len(), 5);
    let ad = run(&["kgb", "--group", "A1", "--isogeny", "ad", "--inner", "c"]);
    assert!(ad.status.success());
    assert_eq!(stdout_lines(&ad).len(), 3);
}

#[test]
fn kgb_output_is_byte_stable() {
    let args = ["kgb", "--group", "B2", "--isogeny", "sc", "--inner", "c"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // and the first record is pinned exactly
    let first = stdout_lines(&run(&["kgb", "--group", "A1", "--isogeny", "sc", "--inner", "c"]))
        .remove(0);
    assert_eq!(
        first,
        "{\"id\":0,\"twisted_involution_word\":[],\"torus_part\":[\"0\"],\"z\":[\"0\"],\"fiber_index\":0,\"gradings_of_simples\":[\"c\"],\"cross_table\":[0],\"cayley_table\":[null]}"
    );
}

#[test]
fn kgb_z_filter() {
    let all = run(&["kgb", "--group", "A1", "--isogeny", "sc", "--inner", "c"]);
    let z0 = run(&["kgb", "--group", "A1", "--isogeny", "sc", "--inner", "c", "--z", "0"]);
    let zh = run(&["kgb", "--group", "A1", "--isogeny", "sc", "--inner", "c", "--z", "1/2"]);
    assert_eq!(stdout_lines(&all).len(), 5);
    assert_eq!(stdout_lines(&z0).len(), 2);
    assert_eq!(stdout_lines(&zh).len(), 3);
}

#[test]
fn bad_group_is_an_input_error() {
    let o = run(&["kgb", "--group", "Z9", "--inner", "c"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn param_reports_standardness() {
    let raw = r#"{"group":"A1","isogeny":"sc","inner":"c","lambda":["0"],"y":{"t":["1/2"],"word":[]}}"#;
    let o = run_with_stdin(&["param", "--file", "-"], raw);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout_lines(&o).remove(0);
    assert!(line.contains("\"standard\":false"), "{}", line);
    assert!(line.contains("\"final_characters\":[[0],[2]]"), "{}", line);
}

#[test]
fn invalid_parameter_exits_2() {
    // y^2 does not match e(lambda)
    let bad = r#"{"group":"A1","isogeny":"sc","inner":"c","lambda":["0"],"y":{"t":["1/3"],"word":[]}}"#;
    let o = run_with_stdin(&["param", "--file", "-"], bad);
    assert_eq!(o.status.code(), Some(2));
    // unparseable JSON
    let o = run_with_stdin(&["lkt", "--file", "-"], "{\"group\":");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lkt_two_routes_agree() {
    let p = r#"{"group":"A1","isogeny":"sc","inner":"c","lambda":["0"],"y":{"t":["1/2"],"word":[0]}}"#;
    let o = run_with_stdin(&["lkt", "--file", "-", "--trace"], p);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = stdout_lines(&o);
    assert_eq!(lines.len(), 2); // one line per final character
    for l in &lines {
        assert!(l.contains("\"paths_agree\":true"), "{}", l);
        assert!(l.contains("\"trail\":"), "{}", l);
    }
    // the two final characters pick out the two rank-one discrete-series
    // KGB points
    assert!(lines[0].contains("\"torus_part\":[\"1/4\"]"));
    assert!(lines[1].contains("\"torus_part\":[\"3/4\"]"));
}

#[test]
fn packet_requires_tempiric() {
    let ps = r#"{"group":"A1","isogeny":"sc","inner":"c","lambda":["1/2"],"y":{"t":["1/4"],"word":[]}}"#;
    let o = run_with_stdin(&["packet", "--file", "-"], ps);
    assert_eq!(o.status.code(), Some(2));
    let temp = r#"{"group":"A1","isogeny":"sc","inner":"c","lambda":["0"],"y":{"t":["1/2"],"word":[0]}}"#;
    let o = run_with_stdin(&["packet", "--file", "-"], temp);
    assert!(o.status.success());
    assert_eq!(stdout_lines(&o).len(), 2);
}

#[test]
fn selftest_quick_passes() {
    let o = run(&["selftest", "--level", "quick"]);
    assert!(o.status.success());
    let lines = stdout_lines(&o);
    assert_eq!(lines.len(), 16); // two groups, eight checks each
    assert!(lines.iter().all(|l| l.contains("\"ok\":true")));
}
