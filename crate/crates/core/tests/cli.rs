use std::path::{Path, PathBuf};
use std::process::Command;

use scheme_forge::cli::run;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sf(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("scheme-forge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen_cyclotomic(dir: &Path, prime: usize) -> PathBuf {
    let path = dir.join(format!("z{prime}.asc"));
    let o = sf(&["gen", "cyclotomic", "--p", &prime.to_string(), "-o", p(&path)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    path
}

#[test]
fn gen_then_report_passes() {
    let dir = tempfile::tempdir().unwrap();
    let z13 = gen_cyclotomic(dir.path(), 13);
    let o = sf(&["report", p(&z13)]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("all checks passed"));
    assert!(!o.stdout.lines().any(|l| l.starts_with("fail")));
}

#[test]
fn five_point_report_marks_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let z5 = gen_cyclotomic(dir.path(), 5);
    let o = sf(&["report", p(&z5)]);
    assert_eq!(o.code, 0);
    let line = |name: &str| o.stdout.lines().find(|l| l.contains(name)).unwrap().to_string();
    assert!(line("two-point-rigidity").starts_with("n/a (hypothesis unmet)"));
    assert!(line("fission-semiregular").starts_with("n/a (hypothesis unmet)"));
    assert!(line("frobenius-witness").starts_with("pass"));
    assert!(line("frobenius-witness").contains("order 20"));
}

#[test]
fn json_report_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let z17 = gen_cyclotomic(dir.path(), 17);
    let a = sf(&["report", p(&z17), "--json"]);
    let b = sf(&["report", p(&z17), "--json"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["n"], 17);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), scheme_forge::report::check_names().len());
}

#[test]
fn corrupted_file_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let z13 = gen_cyclotomic(dir.path(), 13);
    assert_eq!(sf(&["check", p(&z13)]).code, 0);
    let text = std::fs::read_to_string(&z13).unwrap();
    let mut rows: Vec<Vec<String>> = text.lines().map(|l| l.split(' ').map(String::from).collect()).collect();
    // Recolor the pair {0,1} with the color of {0,2}, keeping symmetry.
    let other = rows[1][2].clone();
    rows[1][1] = other.clone();
    rows[2][0] = other;
    let bad: String = rows.iter().map(|r| r.join(" ") + "\n").collect();
    let path = dir.path().join("corrupted.asc");
    std::fs::write(&path, bad).unwrap();
    let o = sf(&["check", p(&path)]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("is not constant"), "{}", o.stderr);
    // Other commands treat it as invalid input.
    assert_eq!(sf(&["report", p(&path)]).code, 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sf(&[]).code, 2);
    assert_eq!(sf(&["frobnicate"]).code, 2);
    assert_eq!(sf(&["gen", "cyclotomic"]).code, 2);
    let o = sf(&["gen", "cyclotomic", "--p", "7"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("7"));
    assert_eq!(sf(&["--help"]).code, 0);
}

#[test]
fn bad_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.asc");
    assert_eq!(sf(&["report", p(&missing)]).code, 3);
    let junk = dir.path().join("junk.asc");
    std::fs::write(&junk, "3 2\n0 1\n").unwrap();
    let o = sf(&["props", p(&junk)]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("line 2"), "{}", o.stderr);
}

#[test]
fn props_lemmas_and_design() {
    let dir = tempfile::tempdir().unwrap();
    let z13 = gen_cyclotomic(dir.path(), 13);
    let o = sf(&["props", p(&z13)]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("k-equivalenced: 4"));
    assert!(o.stdout.contains("c(s): [3, 3, 3]"));
    assert_eq!(sf(&["lemmas", p(&z13)]).code, 0);
    let d = sf(&["design", p(&z13)]);
    assert_eq!(d.code, 0);
    assert!(d.stdout.contains("n = 13, b = 39, k = 4, lambda = 3"));
}

#[test]
fn plane_prints_grid_and_orbits() {
    let dir = tempfile::tempdir().unwrap();
    let z13 = gen_cyclotomic(dir.path(), 13);
    let o = sf(&["plane", p(&z13), "--s", "1", "--alpha", "0", "--radius", "2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    // 5 grid rows of 5 cells
    let grid: Vec<&str> = o.stdout.lines().skip(1).take(5).collect();
    assert!(grid.iter().all(|l| l.split_whitespace().count() == 5));
    assert!(o.stdout.contains("rotation invariant: true"));
    assert!(o.stdout.contains("column axis read as P(0,i)"));
    let j = sf(&["plane", p(&z13), "--s", "1", "--alpha", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 49);
    assert_eq!(sf(&["plane", p(&z13), "--s", "9", "--alpha", "0"]).code, 2);
}

#[test]
fn fission_base_aut_frobenius() {
    let dir = tempfile::tempdir().unwrap();
    let v25 = dir.path().join("v25.asc");
    let perm = dir.path().join("v25.perm");
    let o = sf(&["gen", "vector", "--p", "5", "--d", "2", "-o", p(&v25), "--perm", p(&perm)]);
    assert_eq!(o.code, 0);

    let f = sf(&["fission", p(&v25), "--points", "0"]);
    assert_eq!(f.code, 0);
    assert!(f.stdout.contains("semiregular off 0: true"));
    let f2 = sf(&["fission", p(&v25), "--points", "0,1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&f2.stdout).unwrap();
    assert_eq!(v["complete"], true);
    assert_eq!(sf(&["fission", p(&v25), "--points", "99"]).code, 2);

    let b = sf(&["base", p(&v25)]);
    assert_eq!(b.code, 0);
    assert!(b.stdout.contains("b = 2"));

    let aut_perm = dir.path().join("aut.perm");
    let a = sf(&["aut", p(&v25), "-o", p(&aut_perm)]);
    assert_eq!(a.code, 0);
    assert!(a.stdout.contains("order: 100"));
    assert_eq!(sf(&["frobenius", p(&aut_perm)]).code, 0);
    assert_eq!(sf(&["frobenius", p(&perm)]).code, 0);
    let w = sf(&["frobenius", p(&v25)]);
    assert_eq!(w.code, 0);
    assert!(w.stdout.contains("order: 100"));
    assert_eq!(sf(&["aut", p(&v25), "--bound", "10"]).code, 1);
}

#[test]
fn five_point_aut_is_not_frobenius() {
    let dir = tempfile::tempdir().unwrap();
    let z5 = gen_cyclotomic(dir.path(), 5);
    let aut = dir.path().join("sym5.perm");
    assert_eq!(sf(&["aut", p(&z5), "-o", p(&aut)]).code, 0);
    let o = sf(&["frobenius", p(&aut)]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("frobenius: false"));
    assert_eq!(sf(&["base", p(&z5)]).code, 1);
}

#[test]
fn binary_honors_thread_variable() {
    let dir = tempfile::tempdir().unwrap();
    let z13 = gen_cyclotomic(dir.path(), 13);
    let bin = env!("CARGO_BIN_EXE_scheme-forge");
    let bad = Command::new(bin)
        .args(["report", p(&z13)])
        .env("SCHEME_FORGE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let one = Command::new(bin)
        .args(["report", p(&z13), "--json"])
        .env("SCHEME_FORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(String::from_utf8(one.stdout).unwrap(), sf(&["report", p(&z13), "--json"]).stdout);
}
