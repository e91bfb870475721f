//! End-to-end checks of the `fairspread` binary: flags, outputs, exit codes.

use std::io::Write;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fairspread"))
}

#[test]
fn run_on_sbm_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let status = binary()
        .args([
            "run",
            "--sbm",
            "15,12,0.3,0.05,9",
            "--k",
            "3",
            "--p",
            "0.1",
            "--algo",
            "bas_d,hrt_d",
            "--R",
            "60",
            "--seed",
            "5",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for name in [
        "summary.csv",
        "meta.json",
        "outreach_bas_d_0.1.csv",
        "hist_bas_d_0.1.csv",
        "seeds_hrt_d_0.1.json",
    ] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3, "header plus two rows:\n{summary}");
    assert!(summary.starts_with("dataset,algorithm,p,k,beta,"));
}

#[test]
fn run_with_edge_and_attribute_files() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("toy.edges");
    let attrs = dir.path().join("toy.attrs");
    let mut f = std::fs::File::create(&edges).unwrap();
    writeln!(f, "# toy triangle plus a tail").unwrap();
    writeln!(f, "a b\nb c\na c\nc d").unwrap();
    let mut f = std::fs::File::create(&attrs).unwrap();
    writeln!(f, "node,group\na,1\nb,1\nc,2\nd,2").unwrap();
    let out = dir.path().join("results");
    let status = binary()
        .args(["run", "--dataset"])
        .arg(&edges)
        .arg("--attrs")
        .arg(&attrs)
        .args(["--k", "2", "--p", "0.5", "--algo", "bas_d", "--R", "40", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let seeds: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("seeds_bas_d_0.5.json")).unwrap())
            .unwrap();
    // seed ids come back in the original file labels
    let ids: Vec<&str> = seeds["seed_ids"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for id in &ids {
        assert!(["a", "b", "c", "d"].contains(id), "unexpected id {id}");
    }
}

#[test]
fn missing_dataset_is_a_config_error() {
    let output = binary().args(["run", "--k", "3"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_algorithm_is_a_config_error() {
    let output = binary()
        .args(["run", "--sbm", "5,5,0.5,0.1", "--k", "2", "--algo", "fancy"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unreadable_dataset_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = binary()
        .args(["run", "--dataset", "/nonexistent/edges.txt", "--attrs"])
        .arg(dir.path().join("also-missing.csv"))
        .args(["--k", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let out = dir.path().join("results");
    std::fs::write(
        &cfg_path,
        format!(
            r#"{{
  "dataset": {{"sbm": {{"n1": 10, "n2": 10, "p_in": 0.4, "p_out": 0.1, "seed": 3}}}},
  "k": 2,
  "p_values": [0.9],
  "realizations": 30,
  "output_dir": {dir:?}
}}"#,
            dir = out.display().to_string()
        ),
    )
    .unwrap();
    let status = binary()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .args(["--p", "0.2", "--algo", "bas_d"])
        .status()
        .unwrap();
    assert!(status.success());
    // the override replaced the config's p
    assert!(out.join("outreach_bas_d_0.2.csv").exists());
    assert!(!out.join("outreach_bas_d_0.9.csv").exists());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["p_values"][0], 0.2);
}

#[test]
fn sweep_and_compare_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let status = binary()
        .args([
            "sweep",
            "--sbm",
            "12,10,0.35,0.08,4",
            "--k",
            "2",
            "--algo",
            "bas_d",
            "--R",
            "50",
            "--grid",
            "0.1,0.5,0.9",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let sweep = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 4);
    assert!(sweep.starts_with("p,mutual_fairness,equity_score,equity_gap,efficiency"));

    let status = binary()
        .args([
            "compare",
            "--sbm",
            "12,10,0.35,0.08,4",
            "--k",
            "2",
            "--algo",
            "bas_d,hrt_d",
            "--R",
            "50",
            "--p",
            "0.3",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("compare.csv").exists());
    let points: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("compare.json")).unwrap()).unwrap();
    assert_eq!(points.as_array().unwrap().len(), 2);
}
