use std::path::PathBuf;
use std::process::Command;

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Vec<String>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_selfsim"));
    cmd.args(args).env_remove("SELFSIM_MAX_ENUM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    (out.status.code().unwrap_or(-1), text.lines().map(str::to_string).collect())
}

fn run(args: &[&str]) -> (i32, Vec<String>) {
    run_env(args, &[])
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

const KINDS: [&str; 10] = ["COMMAND", "PARAM", "VERDICT", "WITNESS", "COUNT", "WARN", "INFO", "ITEM", "ERROR", "TIME"];

fn well_formed(lines: &[String]) {
    assert!(lines[0].starts_with("COMMAND "), "{lines:?}");
    assert!(lines.last().unwrap().starts_with("TIME "), "{lines:?}");
    for l in lines {
        let kind = l.split(' ').next().unwrap();
        assert!(KINDS.contains(&kind), "unexpected record `{l}`");
    }
}

#[test]
fn passing_analysis_exits_zero() {
    let (code, lines) = run(&["validate", &data("arrow.sys")]);
    assert_eq!(code, 0);
    well_formed(&lines);
    assert!(lines.contains(&"COUNT 4 declarations".to_string()));
}

#[test]
fn failed_verdict_exits_one() {
    let (code, lines) = run(&["flat", &data("sparse.sys")]);
    assert_eq!(code, 1);
    well_formed(&lines);
    assert!(lines.iter().any(|l| l == "WITNESS at b: condition (1): no element out of b"));
    let (code, lines) = run(&["koenig", &data("empty_chain.txt")]);
    assert_eq!(code, 1);
    assert!(lines.iter().any(|l| l == "WITNESS level 1 is empty"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let (code, lines) = run(&["validate", &data("bad.sys")]);
    assert_eq!(code, 2);
    well_formed(&lines);
    assert!(lines.iter().any(|l| l == "ERROR parse error at line 3, column 19: unknown object `y`"), "{lines:?}");
}

#[test]
fn invalid_declarations_exit_two() {
    let (code, lines) = run(&["validate", &data("invalid_module.sys")]);
    assert_eq!(code, 2);
    assert!(lines.iter().any(|l| l == "ERROR module m: right action undefined: f @ ea"), "{lines:?}");
    // analyses refuse invalid input
    let (code, _) = run(&["flat", &data("invalid_module.sys")]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["solvable", "builtin:streams(alphabet=2,bound=2)"]).0, 2);
    assert_eq!(run(&["solvable", "builtin:streams(alphabet=2,bound=2)", "--strong", "--weak"]).0, 2);
    assert_eq!(run(&["final", "no/such/file.sys"]).0, 2);
    assert_eq!(run(&["final", "builtin:streams(alphabet=2"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn enumeration_cap_exits_three() {
    let args = ["final", "builtin:streams(alphabet=2,bound=4)", "--depth", "3", "--anchor", "1"];
    let (code, lines) = run_env(&args, &[("SELFSIM_MAX_ENUM", "10")]);
    assert_eq!(code, 3);
    assert!(lines.iter().any(|l| l.starts_with("ERROR enumeration bound exceeded")));
    assert!(lines.contains(&"PARAM max_enum=10".to_string()));
    assert_eq!(run(&args).0, 0);
}

#[test]
fn reports_are_deterministic() {
    let cases: [&[&str]; 4] = [
        &["solvable", "builtin:trees(labels=1,bound=3)", "--strong", "--depth", "2"],
        &["final", &data("arrow.sys"), "--depth", "2", "--classes"],
        &["example", "streams", "zip", "--prefix", "6"],
        &["compact", "builtin:streams(alphabet=2,bound=2)", "--diagram", "1=<0.0>;1=<1.0>", "--depth", "2"],
    ];
    for args in cases {
        let strip = |v: Vec<String>| v.into_iter().filter(|l| !l.starts_with("TIME ")).collect::<Vec<_>>();
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        assert_eq!(c1, c2);
        assert_eq!(strip(a), strip(b), "{args:?}");
    }
}

#[test]
fn streams_counts_double() {
    let (code, lines) = run(&["final", "builtin:streams(alphabet=2,bound=4)", "--depth", "3", "--anchor", "1", "--counts"]);
    assert_eq!(code, 0);
    assert!(lines.contains(&"COUNT 8 classes anchor=1 depth=3 within bound 4".to_string()));
    assert!(lines.contains(&"INFO anchor 1: classes by depth 1 2 4 8".to_string()));
}

#[test]
fn solve_and_koenig_report_items() {
    let (code, lines) = run(&["solve", &data("arrow.sys"), "--coalgebra", "e", "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(lines.iter().filter(|l| l.starts_with("ITEM ")).count(), 3);
    assert!(lines.iter().any(|l| l == "VERDICT pass sol_2 is the unique such map"));
    let (code, lines) = run(&["koenig", &data("chain.txt")]);
    assert_eq!(code, 0);
    assert!(lines.contains(&"ITEM thread a <- x".to_string()), "{lines:?}");
}

#[test]
fn compact_counts_cones() {
    let (code, lines) =
        run(&["compact", "builtin:streams(alphabet=2,bound=2)", "--diagram", "1=<0.0>;1=<1.0>", "--depth", "2"]);
    assert_eq!(code, 0);
    for (n, k) in [(0, 5), (1, 10), (2, 20)] {
        assert!(lines.contains(&format!("COUNT {k} cones at level {n}")), "{lines:?}");
    }
    let (code, lines) = run(&["compact", "builtin:streams(alphabet=2,bound=2)", "--diagram", "1=<9.9>"]);
    assert_eq!(code, 2);
    assert!(lines.iter().any(|l| l.starts_with("ERROR ")));
}

#[test]
fn examples_run() {
    for args in [
        &["example", "freyd", "beh", "--digits", "0110"][..],
        &["example", "freyd", "surjective", "--depth", "3"],
        &["example", "freyd", "serial", "--bound", "3"],
        &["example", "lin", "laws", "--size", "3"],
        &["example", "lin", "final"],
        &["example", "trees", "counts", "--depth", "1"],
        &["example", "streams", "counts", "--depth", "1"],
    ] {
        let (code, lines) = run(args);
        assert_eq!(code, 0, "{args:?}: {lines:?}");
        well_formed(&lines);
    }
    assert_eq!(run(&["example", "trees", "zip"]).0, 2);
}
