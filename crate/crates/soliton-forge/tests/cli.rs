//! Black-box tests of the command-line interface, driving the compiled
//! binary and asserting on exit codes and output contracts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_soliton-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn list_prints_the_catalog() {
    let out = run(&["list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("euclidean:n=2"));
    assert!(text.contains("(n-1)/s"));
    assert!(text.contains("boost:omega2"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn solve_bowl_passes_the_gate() {
    let out = run(&["solve", "--space", "euclidean:n=2", "--singular", "0", "--range", "0,5"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("max_abs="));
}

#[test]
fn solve_desitter_regular_start_spans_the_line() {
    let out = run(&[
        "solve", "--space", "desitter:n=2", "--epsilon", "1", "--s0", "0", "--f0", "0",
        "--f1", "0", "--range", "-20,20",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solve_past_the_gradient_barrier_reports_an_event() {
    // |f'(0)| > 1 starts outside the spacelike cone; integration must stop
    let out = run(&[
        "solve", "--space", "desitter:n=2", "--epsilon", "1", "--s0", "0", "--f0", "0",
        "--f1", "1.5", "--range", "-20,20",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn solve_without_required_arguments_is_a_config_error() {
    let out = run(&["solve", "--space", "euclidean:n=2", "--range", "0,5"]);
    assert_eq!(code(&out), 2);
    let out = run(&["solve", "--space", "nowhere:n=7", "--singular", "0", "--range", "0,5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn catenoid_reports_the_neck_data() {
    let out = run(&[
        "catenoid", "--s-neck", "1", "--extent", "0.8", "--tol-abs", "1e-12", "--tol-rel",
        "1e-11",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("y0=0.00000000000e0"));
    assert!(text.contains("alpha_second_at_neck=1.00000000000e0"));
    assert!(text.contains("branch=lower"));
    assert!(text.contains("branch=upper"));
}

#[test]
fn glue_certifies_and_exits_clean() {
    let out = run(&["glue", "--a", "0.5"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("cross_cone_max="));
}

#[test]
fn verify_accepts_clean_profiles_and_flags_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("prof.csv");
    let out = bin()
        .args(["solve", "--space", "euclidean:n=2", "--singular", "0", "--range", "0,5", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);

    let verify = |path: &Path, oracle: &str| {
        bin()
            .args(["verify", "--space", "euclidean:n=2", "--oracle", oracle, "--input"])
            .arg(path)
            .output()
            .unwrap()
    };
    assert_eq!(code(&verify(&csv, "ode")), 0);
    assert_eq!(code(&verify(&csv, "hperturbed")), 0);

    // bump one f' sample by 1e-3 and expect the gate to trip
    let text = std::fs::read_to_string(&csv).unwrap();
    let corrupted: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, line)| {
            if i == 400 {
                let mut parts: Vec<&str> = line.split(',').collect();
                let bumped = format!("{}", parts[2].parse::<f64>().unwrap() + 1e-3);
                parts[2] = &bumped;
                parts.join(",")
            } else {
                line.to_string()
            }
        })
        .collect();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, corrupted.join("\n")).unwrap();
    assert_eq!(code(&verify(&bad, "ode")), 4);
}

#[test]
fn config_file_merges_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bowl run\nspace=euclidean:n=2\nsingular=0\nrange=0,5\n").unwrap();
    let a = dir.path().join("a.csv");
    let out = bin()
        .arg("solve")
        .arg("--config")
        .arg(&cfg)
        .args(["--range", "0,4", "--out"])
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&a).unwrap();
    // the flag range overrides the file's: last abscissa is 4, not 5
    assert!(text.lines().last().unwrap().starts_with("4.00000000000e0,"));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "space=euclidean:n=2\nbogus=1\n").unwrap();
    let out = bin().arg("solve").arg("--config").arg(&bad).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (name, threads) in [("a.csv", "1"), ("b.csv", "4")] {
        let path = dir.path().join(name);
        let out = bin()
            .args([
                "solve", "--space", "hyperbolic:n=2", "--singular", "0", "--range", "0,8",
                "--threads", threads, "--out",
            ])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn export_obj_has_the_advertised_shape() {
    let out = run(&[
        "export", "--space", "euclidean:n=2", "--singular", "0", "--range", "0,3", "--format",
        "obj",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let vertices = text.lines().filter(|l| l.starts_with("v ")).count();
    let faces = text.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(vertices, 64 * 129);
    assert_eq!(faces, 64 * 128 * 2);
}
