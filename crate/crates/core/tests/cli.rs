use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nstrees::cli::{MutationName, RunConfig};
use tempfile::TempDir;

fn small_config(dir: &Path) -> RunConfig {
    let mut c = RunConfig::default();
    c.grid.cutoff = 3.0;
    c.grid.points_per_axis = 7;
    c.grid.time_horizon = 1.0;
    c.grid.time_nodes = 9;
    c.truncation.size_cap = 3;
    c.output.dir = dir.join("out");
    c
}

fn write_config(dir: &Path, c: &RunConfig) -> std::path::PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, c.to_toml().unwrap()).unwrap();
    p
}

fn nstrees(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nstrees"))
        .args(args)
        .env_remove("NSTREES_OUT_DIR")
        .output()
        .unwrap()
}

fn data_rows(p: &Path) -> usize {
    fs::read_to_string(p).unwrap().lines().count() - 1
}

#[test]
fn trees_writes_every_tree_and_counts() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("t");
    let o = nstrees(&["trees", "--max-size", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_rows(&out.join("trees.csv")), 47);
    assert_eq!(data_rows(&out.join("counts.csv")), 7);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn simple_class_has_one_tree_per_size() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("t");
    let o = nstrees(&["trees", "--class", "simple", "--max-size", "10", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(data_rows(&out.join("trees.csv")), 10);
}

#[test]
fn evaluate_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), &small_config(tmp.path()));
    let out = tmp.path().join("same");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = nstrees(&["evaluate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        runs.push(fs::read(out.join("series.json")).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn zero_datum_gives_trivial_series() {
    let tmp = TempDir::new().unwrap();
    let mut c = small_config(tmp.path());
    c.initial.amplitude = 0.0;
    let cfg = write_config(tmp.path(), &c);
    let o = nstrees(&["evaluate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(c.output.dir.join("series.json")).unwrap()).unwrap();
    assert_eq!(v["regime"], "trivial");
}

#[test]
fn verify_filter_and_mutation() {
    let tmp = TempDir::new().unwrap();
    let mut c = small_config(tmp.path());
    let cfg = write_config(tmp.path(), &c);
    let o = nstrees(&["verify", "--config", cfg.to_str().unwrap(), "--only", "lemma2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: serde_json::Value = serde_json::from_slice(&fs::read(c.output.dir.join("suite.json")).unwrap()).unwrap();
    let names: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(!names.is_empty() && names.iter().all(|n| n.starts_with("lemma2")));

    for m in [MutationName::DropGraftFactor, MutationName::DropSymmetryWeight] {
        c.suite.mutation = m;
        let cfg = write_config(tmp.path(), &c);
        let o = nstrees(&["verify", "--config", cfg.to_str().unwrap(), "--only", "lemma2"]);
        assert_eq!(o.status.code(), Some(2), "{m:?} went undetected");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(nstrees(&["verify", "--only", "bogus"]).status.code(), Some(1));
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("bad.toml");
    fs::write(&p, "[grid]\ncutoff = 1.0\n").unwrap();
    assert_eq!(nstrees(&["trees", "--config", p.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn out_flag_beats_environment() {
    let tmp = TempDir::new().unwrap();
    let env_dir = tmp.path().join("env");
    let flag_dir = tmp.path().join("flag");
    let run = |extra: &[&str]| {
        let mut args = vec!["trees", "--max-size", "3"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_nstrees"))
            .args(&args)
            .env("NSTREES_OUT_DIR", &env_dir)
            .output()
            .unwrap()
    };
    assert!(run(&[]).status.success());
    assert!(env_dir.join("trees.csv").exists());
    assert!(run(&["--out", flag_dir.to_str().unwrap()]).status.success());
    assert!(flag_dir.join("trees.csv").exists());
}
