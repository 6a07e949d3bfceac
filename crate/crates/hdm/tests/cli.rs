use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdm")).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    hdm(&args)
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let flags = ["--problem", "vk", "--method", "morley", "--levels", "3", "--format", "both", "--properties"];
    for (dir, threads) in [(&a, "1"), (&b, "1"), (&c, "4")] {
        let mut f = flags.to_vec();
        f.extend(["--threads", threads]);
        let out = run_in(dir.path(), &f);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["vk_morley_square.csv", "vk_morley_square.md", "vk_morley_square_properties.csv"] {
        let first = fs::read(a.path().join(name)).unwrap();
        assert_eq!(first, fs::read(b.path().join(name)).unwrap(), "{name}");
        assert_eq!(first, fs::read(c.path().join(name)).unwrap(), "{name} threaded");
    }
}

#[test]
fn exit_code_follows_newton_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run_in(dir.path(), &["--levels", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    let stalled = run_in(dir.path(), &["--problem", "vk", "--levels", "3", "--max-iter", "1"]);
    assert_eq!(stalled.status.code(), Some(1));
    assert!(dir.path().join("vk_morley_square.csv").exists());
}

#[test]
fn invalid_combinations_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--method", "gr", "--domain", "lshape", "--problem", "vk"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("gr") && msg.contains("lshape") && msg.contains("--allow-extension"), "{msg}");
    assert_eq!(run_in(dir.path(), &["--levels", "0"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["--newton-tol", "-1"]).status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# study\nmethod = adini\nlevels = 2\nformat = markdown\n").unwrap();
    let out = run_in(dir.path(), &["--config", cfg.to_str().unwrap(), "--method", "gr"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("ns_gr_square.md").exists());
    assert!(!dir.path().join("ns_adini_square.md").exists());
    assert!(!dir.path().join("ns_gr_square.csv").exists());

    fs::write(&cfg, "levels: 2\n").unwrap();
    let bad = run_in(dir.path(), &["--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1"));
}

#[test]
fn mesh_dump_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--levels", "1", "--method", "gr", "--dump-mesh"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("ns_gr_square_mesh_l0.txt")).unwrap();
    assert_eq!(text, "4 5 2\n0 0.0 0.0\n1 1.0 0.0\n2 1.0 1.0\n3 0.0 1.0\n0 tri 0 1 2\n1 tri 0 2 3\n");
}
