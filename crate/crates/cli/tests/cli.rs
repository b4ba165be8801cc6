use std::path::Path;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).env_remove("VERIFY_CACHE_DIR").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn convexity_suite_passes() {
    let out = verify(&["run", "--suite", "convexity", "--n", "3", "--lmax", "2", "--length-bound", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("gate_property"));
}

#[test]
fn pairing_identity_over_f2_passes() {
    let out = verify(&["run", "--suite", "residue", "--p", "2", "--m", "1", "--n", "2", "--lemma", "10"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn printed_pairing_constant_fails_over_f3() {
    let out = verify(&["run", "--suite", "residue", "--p", "3", "--m", "1", "--n", "2", "--lemma", "10"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("counterexample"));
    let fixed = verify(&["run", "--suite", "residue", "--p", "3", "--m", "1", "--n", "2", "--lemma", "10", "--pairing-constant", "corrected"]);
    assert_eq!(code(&fixed), 0);
}

#[test]
fn invalid_configurations_exit_with_two() {
    assert_eq!(code(&verify(&["run", "--suite", "weyl", "--n", "3..2"])), 2);
    assert_eq!(code(&verify(&["run", "--suite", "weyl", "--n", ""])), 2);
    assert_eq!(code(&verify(&["run", "--suite", "residue", "--p", "4"])), 2);
    assert_eq!(code(&verify(&["run", "--suite", "nonsense"])), 2);
    assert_eq!(code(&verify(&["run", "--suite", "assembly", "--m", "1"])), 2);
}

#[test]
fn oversized_group_exits_with_three() {
    let out = verify(&["run", "--suite", "residue", "--n", "3", "--m", "3", "--lemma", "8"]);
    assert_eq!(code(&out), 3);
    let out = verify(&["run", "--suite", "residue", "--n", "2", "--m", "2", "--lemma", "8", "--budget", "50"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn planted_mutations_are_caught() {
    let base = ["run", "--suite", "apartment", "--n", "2,3", "--lmax", "1"];
    assert_eq!(code(&verify(&base)), 0);
    let mut mutated = base.to_vec();
    mutated.extend(["--mutate", "incidence"]);
    assert_eq!(code(&verify(&mutated)), 1);
    let pairing = ["run", "--suite", "residue", "--lemma", "10", "--n", "2", "--qval", "3", "--pairing-constant", "corrected"];
    assert_eq!(code(&verify(&pairing)), 0);
    let mut mutated = pairing.to_vec();
    mutated.extend(["--mutate", "pairing-constant"]);
    assert_eq!(code(&verify(&mutated)), 1);
}

#[test]
fn certificates_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |out: &Path, workers: &str| {
        verify(&[
            "run", "--suite", "convexity", "--n", "2", "--lmax", "2", "--seed", "11", "--workers", workers, "--out", out.to_str().unwrap(),
        ])
    };
    assert_eq!(code(&args(&a, "1")), 0);
    assert_eq!(code(&args(&b, "2")), 0);
    let read = |d: &Path| std::fs::read(d.join("certificates.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    let doc: serde_json::Value = serde_json::from_slice(&read(&a)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert!(a.join("summary.txt").exists());
    assert!(!a.join("counterexamples.json").exists());
}

#[test]
fn failing_run_dumps_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let out = verify(&["run", "--suite", "residue", "--lemma", "10", "--n", "2", "--qval", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let cx: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("counterexamples.json")).unwrap()).unwrap();
    assert_eq!(cx[0]["check"], "pairing_identity");
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "suite = \"residue\"\nlemma = \"10\"\nn = [2]\nqval = [3]\n").unwrap();
    assert_eq!(code(&verify(&["run", "--config", path.to_str().unwrap()])), 1);
    assert_eq!(code(&verify(&["run", "--config", path.to_str().unwrap(), "--qval", "2"])), 0);
    std::fs::write(&path, "suite = 5\n").unwrap();
    assert_eq!(code(&verify(&["run", "--config", path.to_str().unwrap()])), 2);
}

#[test]
fn cache_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = verify(&["cache", "clear", "--cache-dir", d]);
    assert_eq!(code(&out), 0);
    let first = verify(&["cache", "warm", "--p", "2", "--m", "2", "--n", "2", "--cache-dir", d]);
    let second = verify(&["cache", "warm", "--p", "2", "--m", "2", "--n", "2", "--cache-dir", d]);
    assert_eq!(code(&first), 0);
    let digest = |o: &Output| stdout(o).lines().find(|l| l.starts_with("digest")).unwrap().to_string();
    assert_eq!(digest(&first), digest(&second));
    let stat = verify(&["cache", "stat", "--cache-dir", d]);
    assert!(stdout(&stat).contains("gl_p2_m2_n2.json  group  p=2 m=2 n=2  96 elements cached"), "{}", stdout(&stat));
    // the environment variable is honoured and the cached group is used by runs
    let run = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["run", "--suite", "residue", "--n", "2", "--m", "2", "--lemma", "8"])
        .env("VERIFY_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(code(&run), 0);
    assert_eq!(code(&verify(&["cache", "clear", "--cache-dir", d])), 0);
    assert!(!stdout(&verify(&["cache", "stat", "--cache-dir", d])).contains("gl_p2"));
}

#[test]
fn unwritable_cache_directory_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("not_a_dir");
    std::fs::write(&file, "x").unwrap();
    let out = verify(&["cache", "warm", "--cache-dir", file.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}
