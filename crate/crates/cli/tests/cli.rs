use std::process::{Command, Output};

fn trisparse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trisparse")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn extremal_lines(out: &str) -> Vec<&str> {
    out.split("# extremal graphs\n").nth(1).unwrap_or("").lines().collect()
}

#[test]
fn compute_prints_c5_for_r1_4_4() {
    let o = trisparse(&["compute", "--k", "1", "--i", "4", "--j", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("value = 6\n"));
    assert!(out.contains("extremal_count = 1\n"));
    let lines = extremal_lines(&out);
    assert_eq!(lines.len(), 1);
    let decoded = trisparse(&["decode", lines[0]]);
    let edges = stdout(&decoded);
    // C5: five vertices, five edges, all degrees 2
    let parts: Vec<&str> = edges.split_whitespace().collect();
    assert_eq!(parts[0], "5");
    assert_eq!(parts.len(), 6);
}

#[test]
fn compute_is_byte_identical_and_line_exact() {
    let args = ["compute", "--k", "2", "--j", "6", "--workers", "2"];
    let a = stdout(&trisparse(&args));
    let b = stdout(&trisparse(&["compute", "--k", "2", "--j", "6", "--workers", "1"]));
    assert_eq!(a, b);
    assert!(a.contains("extremal_count = 6\n"));
    assert_eq!(extremal_lines(&a).len(), 6);
}

#[test]
fn check_verdicts() {
    let k33 = stdout(&trisparse(&["encode", "6 0-3 0-4 0-5 1-3 1-4 1-5 2-3 2-4 2-5"]));
    let k33 = k33.trim();
    let o = trisparse(&["check", "--graph", k33, "--k", "1", "--j", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no 1-sparse 4-set"));
    let o = trisparse(&["check", "--graph", k33, "--k", "1", "--j", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("found 1-sparse 3-set {0, 1, 2}"));
    let o = trisparse(&["check", "--graph", "Bw", "--k", "1", "--j", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("contains a triangle"));
}

#[test]
fn bound_reports_witness() {
    // C5: Δ = 2, k = 1 -> 2 colours, bound 3
    let o = trisparse(&["bound", "--graph", "Dhc", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("bound 3\n"));
    assert!(out.contains("size 3\n"));
}

#[test]
fn codec_round_trip_and_errors() {
    let o = trisparse(&["encode", "2 0-1", "1", "5 0-1 1-2 2-3 3-4 0-4"]);
    assert_eq!(stdout(&o), "A_\n@\nDhc\n");
    let o = trisparse(&["decode", "A_", "@", "Dhc"]);
    assert_eq!(stdout(&o), "2 0-1\n1\n5 0-1 0-4 1-2 2-3 3-4\n");
    let o = trisparse(&["decode", "@@"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors() {
    assert_eq!(trisparse(&["compute", "--k", "1"]).status.code(), Some(2));
    assert_eq!(trisparse(&["compute", "--k", "1", "--j", "1"]).status.code(), Some(2));
    assert_eq!(trisparse(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn capped_runs_exit_3() {
    let o = trisparse(&["compute", "--k", "1", "--j", "5", "--max-order", "6"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("status = \"capped\""));
    assert!(!out.contains("# extremal graphs"));
}

#[test]
fn checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let full = trisparse(&["compute", "--k", "1", "--j", "4", "--checkpoint", d]);
    assert_eq!(full.status.code(), Some(0));
    let level5 = dir.path().join("T_k1_j4_n05.level");
    assert!(level5.exists());
    let resumed = trisparse(&["compute", "--k", "1", "--j", "4", "--resume", level5.to_str().unwrap()]);
    assert_eq!(resumed.status.code(), Some(0));
    let (a, b) = (stdout(&full), stdout(&resumed));
    assert!(b.contains("value = 7\n") && b.contains("extremal_count = 2\n"));
    assert_eq!(extremal_lines(&a), extremal_lines(&b));
    let wrong = trisparse(&["compute", "--k", "1", "--j", "5", "--resume", level5.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    let o = trisparse(&["compute", "--k", "1", "--j", "3", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("seconds"));
    assert!(text.contains("extremal = ["));
}

#[test]
fn probe_and_oracle() {
    let o = trisparse(&["probe-conjecture", "--k-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with("agree")).count(), 3);
    let o = trisparse(&["oracle-verify", "--n", "6", "--k", "1", "--j", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(" ok")).count(), 6);
}
