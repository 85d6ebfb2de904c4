use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minkdiam"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("minkdiam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

const SQUARE: &str = "V-representation\nbegin\n4 3 rational\n1 0 0\n1 1 0\n1 0 1\n1 1 1\nend\n";
const XSEG: &str = "V-representation\nbegin\n2 3 rational\n1 0 0\n1 1 0\nend\n";

#[test]
fn xi_diameter_through_a_pipe() {
    let gen = run(&["gen", "xi", "--k", "5", "--l", "4"]);
    assert!(gen.status.success());
    let text = stdout(&gen);
    assert_eq!(text.lines().filter(|l| l.starts_with(" 1 ")).count(), 80);
    let out = run_stdin(&["diameter", "-"], &text);
    assert!(out.status.success());
    let line = stdout(&out).lines().next().unwrap().to_string();
    let d: usize = line.strip_prefix("diameter: ").unwrap().parse().unwrap();
    assert!(d <= 11, "{line}");
}

#[test]
fn summand_of_square() {
    let sq = temp("square.ext", SQUARE);
    let seg = temp("xseg.ext", XSEG);
    let out = run(&["summand", sq.to_str().unwrap(), seg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("homothetic-summand: true"), "{text}");
    assert!(text.contains("is-summand: true"));
}

#[test]
fn sum_and_decomposition() {
    let sq = temp("square2.ext", SQUARE);
    let seg = temp("xseg2.ext", XSEG);
    let out = run(&["sum", sq.to_str().unwrap(), seg.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"vertices\""));
    let out = run(&["sum", sq.to_str().unwrap(), seg.to_str().unwrap(), "--decomposition"]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn zonotope_and_fans() {
    let gen = stdout(&run(&["gen", "cube", "--d", "3"]));
    let out = run_stdin(&["is-zonotope", "-"], &gen);
    assert!(stdout(&out).starts_with("zonotope: true\ngenerators: 3"));
    let simplex = stdout(&run(&["gen", "simplex", "--d", "3"]));
    let out = run_stdin(&["is-zonotope", "-"], &simplex);
    assert!(stdout(&out).starts_with("zonotope: false"));
    let sq = temp("square3.ext", SQUARE);
    let out = run(&["fans", "equal", sq.to_str().unwrap(), sq.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn erosion_empty_is_a_check_failure() {
    let seg = temp("xseg3.ext", XSEG);
    let big = temp("big.ext", "V-representation\nbegin\n2 3 rational\n1 0 0\n1 5 0\nend\n");
    let out = run(&["erode", big.to_str().unwrap(), seg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with(" 1 ")).count(), 2);
    let out = run(&["erode", seg.to_str().unwrap(), big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "xi", "--k", "5"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "xi", "--k", "5", "--l", "5"]).status.code(), Some(2));
    let out = run_stdin(&["diameter", "-"], "V-representation\nbegin\n1 2 rational\n1 1/0\nend\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "random", "--d", "3", "--n", "9", "--seed", "4", "--format", "ine"]);
    let b = run(&["gen", "random", "--d", "3", "--n", "9", "--seed", "4", "--format", "ine"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_reports() {
    let out = run(&["verify", "lemmas", "--seed", "3", "--trials", "3", "--report", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("suite,seed,instance,check,passed,witness"));
    let out = run(&["verify", "thm41", "--k-values", "3,4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"failed\": 0"));
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "all", "--seed", "7", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let again = run(&["verify", "all", "--seed", "7", "--trials", "50"]);
    assert_eq!(out.stdout, again.stdout);
}
