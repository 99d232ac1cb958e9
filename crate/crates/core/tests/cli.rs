use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_goldeneq"));
    c.env_remove("EQ_SEED");
    c
}

fn call(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    call(args).status.code().expect("exit code")
}

fn problem_file(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn run_reports_iterations_and_solution() {
    let out = call(&["run", "example61", "--solver", "gra1", "--lambda", "0.27", "--x0", "1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("iterations="), "{text}");
    assert!(first.ends_with("status=converged"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("solution=")));
}

#[test]
fn run_from_a_problem_file_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let args = [
        "run",
        &problem_file("example62.txt"),
        "--solver",
        "gra2",
        "--schedule",
        "40/(k+1)",
        "--x0",
        "paper-x0-2",
        "--tol",
        "1e-3",
        "--energy",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("k,residual,energy,wall_ms\n"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["list"]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["run", "nope", "--solver", "gra1"]), 2);
    assert_eq!(code(&["run", "example61", "--solver", "gra9"]), 2);
    assert_eq!(code(&["run", "example61", "--solver", "gra1", "--x0", "1,2"]), 2);
    assert_eq!(code(&["run", "example61", "--solver", "gra1", "--max-iter", "3"]), 3);
    // step above the admissible bound
    assert_eq!(code(&["run", "example61", "--solver", "gra1", "--lambda", "5"]), 4);
    // infeasible start
    assert_eq!(code(&["run", "example61", "--solver", "gra1", "--x0", "9,9,9,9,9"]), 4);
    assert_eq!(code(&["check", "example62", "--samples", "200"]), 0);
    assert_eq!(code(&["check", &problem_file("bad-q.txt")]), 5);
}

#[test]
fn check_honours_seed_variable() {
    let out = bin()
        .args(["check", "example21", "--samples", "100"])
        .env("EQ_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("seed 7"));
    let bad = bin().args(["check", "example21"]).env("EQ_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn help_on_every_verb() {
    assert_eq!(code(&["--help"]), 0);
    for verb in ["run", "table1", "table2", "list", "check"] {
        let out = call(&[verb, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{verb}");
        assert!(!out.stdout.is_empty());
    }
}

fn table_outputs(verb: &str) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    let out = call(&[verb, "--no-timing", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut files = vec![("stdout".to_string(), out.stdout)];
    for sub in [dir.path().to_path_buf(), dir.path().join("traces")] {
        let mut names: Vec<_> = std::fs::read_dir(&sub).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        for p in names.into_iter().filter(|p| p.is_file()) {
            let name = p.strip_prefix(dir.path()).unwrap().display().to_string();
            files.push((name, std::fs::read(&p).unwrap()));
        }
    }
    files
}

#[test]
fn tables_are_byte_identical_without_timing() {
    for verb in ["table1", "table2"] {
        let a = table_outputs(verb);
        let b = table_outputs(verb);
        assert!(a.len() > 3, "{verb}: {:?}", a.iter().map(|f| &f.0).collect::<Vec<_>>());
        assert_eq!(a, b, "{verb}");
    }
}
