use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn mvfint<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_mvfint"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_oscillator_energy() {
    let o = mvfint([
        "verify".as_ref(),
        data("oscillator.mvf").as_os_str(),
        "--integral".as_ref(),
        data("oscillator.int").as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "holds\n");
}

#[test]
fn corrupted_coefficient_fails_with_residual() {
    let bad = scratch(
        "corrupt.int",
        "integral logB\nlead -4 | 1 0\nterm -5 | 0 2\nterm 8 | 2 0\nterm 4 | 1 0\n",
    );
    let o = mvfint([
        "verify".as_ref(),
        data("log_example.mvf").as_os_str(),
        "--integral".as_ref(),
        bad.as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("fails\nresidual:\n"), "{out}");
    assert!(out.lines().count() > 2);
}

#[test]
fn log_example_holds() {
    let o = mvfint([
        "verify".as_ref(),
        data("log_example.mvf").as_os_str(),
        "--integral".as_ref(),
        data("log_example.int").as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_beyond_limit_is_input_error() {
    let o = mvfint([
        "search".as_ref(),
        data("oscillator.mvf").as_os_str(),
        "--max-q".as_ref(),
        "9".as_ref(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_subcommand_and_flag_are_usage_errors() {
    let o = mvfint(["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = mvfint([
        "monomials".as_ref(),
        data("oscillator.mvf").as_os_str(),
        "--bogus".as_ref(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_is_input_error() {
    let o = mvfint(["monomials", "/nonexistent/system.mvf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn syntax_error_is_input_error() {
    let bad = scratch("bad.mvf", "mvf 2\nterm 1 0 | -1\n");
    let o = mvfint(["monomials".as_ref(), bad.as_os_str()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_is_a_fixed_point() {
    let messy = scratch(
        "messy.mvf",
        "# comment\nmvf 2\nterm 2/4 0 | -1 1\nterm 1/2 0 | -1 1 ; term 0 -1 | 1 -1\n",
    );
    let first = mvfint(["parse".as_ref(), messy.as_os_str()]);
    assert_eq!(first.status.code(), Some(0));
    assert!(!first.stderr.is_empty(), "merge note expected");
    let printed = scratch("messy_once.mvf", &stdout(&first));
    let second = mvfint(["parse".as_ref(), printed.as_os_str()]);
    assert_eq!(stdout(&first), stdout(&second));
    for name in [
        "oscillator.arr",
        "oscillator.int",
        "log_example.int",
        "log_example.ode",
    ] {
        let a = mvfint(["parse".as_ref(), data(name).as_os_str()]);
        assert_eq!(a.status.code(), Some(0), "{name}");
        let again = scratch(&format!("again_{name}"), &stdout(&a));
        let b = mvfint(["parse".as_ref(), again.as_os_str()]);
        assert_eq!(stdout(&a), stdout(&b), "{name}");
    }
}

#[test]
fn synthesize_and_search_agree() {
    let syn = mvfint([
        "synthesize".as_ref(),
        data("oscillator.mvf").as_os_str(),
        data("oscillator.arr").as_os_str(),
    ]);
    assert_eq!(syn.status.code(), Some(0));
    assert!(stdout(&syn).starts_with("integral algebraic\nterm 1 | 0 2\nterm 1 | 2 0\n"));
    let found = mvfint([
        "search".as_ref(),
        data("oscillator.mvf").as_os_str(),
        "--max-p".as_ref(),
        "2".as_ref(),
        "--max-q".as_ref(),
        "2".as_ref(),
    ]);
    assert_eq!(found.status.code(), Some(0));
    assert!(stdout(&found).starts_with("# 1 array(s)"));
}

#[test]
fn invalid_array_exits_one() {
    let arr = scratch("abnormal.arr", "array 2 2\n1 2\n2 1\n");
    let o = mvfint([
        "validate-array".as_ref(),
        data("oscillator.mvf").as_os_str(),
        arr.as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = mvfint([
        "synthesize".as_ref(),
        data("oscillator.mvf").as_os_str(),
        arr.as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_matches_text() {
    let o = mvfint([
        "--json", "family", "log", "--q", "4", "--h21", "0", "--h32", "-1", "--c22", "2", "--c23",
        "-3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = stdout(&mvfint([
        "family", "log", "--q", "4", "--h21", "0", "--h32", "-1", "--c22", "2", "--c23", "-3",
    ]));
    let json = v.to_string();
    for value in ["-16/3", "-4"] {
        assert!(json.contains(&format!("\"{value}\"")), "{json}");
        assert!(text.contains(value));
    }
}

#[test]
fn planar_family_branches() {
    let o = mvfint([
        "family", "planar", "--theta", "1", "0", "0", "-1", "-1", "1", "1", "-1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# branch: algebraic"));
    let o = mvfint([
        "family", "planar", "--theta", "1", "0", "0", "1", "0", "1", "1", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("logA"));
    let o = mvfint([
        "family", "planar", "--theta", "1", "0", "0", "1", "1", "1", "1", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_reports_small_drift() {
    let o = mvfint([
        "simulate".as_ref(),
        data("oscillator.mvf").as_os_str(),
        "--integral".as_ref(),
        data("oscillator.int").as_os_str(),
        "--y0".as_ref(),
        "0.6,0.8".as_ref(),
        "--h".as_ref(),
        "1e-3".as_ref(),
        "--t".as_ref(),
        "10".as_ref(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let drift: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("max_drift: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(drift <= 1e-6);
}

#[test]
fn scale_negative_alpha() {
    let o = mvfint([
        "scale".as_ref(),
        data("oscillator.mvf").as_os_str(),
        "--alpha".as_ref(),
        "-1".as_ref(),
        "--integral".as_ref(),
        data("oscillator.int").as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let scaled = stdout(&o);
    let (sys, int) = scaled.split_once("\n\n").unwrap();
    let sys = scratch("scaled.mvf", sys);
    let int = scratch("scaled.int", int);
    let o = mvfint([
        "verify".as_ref(),
        sys.as_os_str(),
        "--integral".as_ref(),
        int.as_os_str(),
    ]);
    assert_eq!(o.status.code(), Some(0));
}
