use std::path::Path;
use std::process::{Command, Output};

use rsk_trajectory::io::{read_csv, CurveRow, RunManifest, TrajectoryRow};

fn rsk_traj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsk-traj"))
        .args(args)
        .env_remove("RSK_TRAJ_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rsk_prints_both_tableaux() {
    let out = rsk_traj(&["rsk", "--seq", "3,1,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "P=[[1,2],[3]]\nQ=[[1,3],[2]]\n");
}

#[test]
fn duplicate_entries_fail_with_one_line() {
    let out = rsk_traj(&["rsk", "--seq", "1,2,1"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error:"));
}

#[test]
fn h_curve_has_201_monotone_rows() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.csv");
    let out = rsk_traj(&[
        "curve",
        "--what",
        "H",
        "--tmin",
        "1",
        "--tmax",
        "3",
        "--points",
        "201",
        "--out",
        path_arg(&file),
    ]);
    assert!(out.status.success());
    let rows: Vec<CurveRow> = read_csv(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(rows.len(), 201);
    assert!(rows.windows(2).all(|w| w[1].x < w[0].x && w[1].y > w[0].y));
    assert!(dir.path().join("h.csv.manifest.json").exists());
}

#[test]
fn invalid_ranges_name_the_constraint() {
    for (args, needle) in [
        (vec!["trajectory", "--n", "10", "--w", "1.5"], "(0, 1]"),
        (vec!["trajectory", "--n", "10", "--w", "-0.5"], "(0, 1]"),
        (
            vec!["trajectory", "--n", "10", "--w", "0.5", "--tmax", "0.5"],
            "≥ 1",
        ),
        (vec!["curve", "--what", "h", "--tmin", "0.5"], "≥ 1"),
        (
            vec!["trajectory", "--n", "0", "--w", "0.5"],
            "n must be at least 1",
        ),
        (vec!["converge", "--nlist", "400,100"], "ascending"),
        (vec!["asympt", "--tlist", "1,8"], "T ≥ 4"),
    ] {
        let out = rsk_traj(&args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    assert!(!rsk_traj(&["trajectory", "--bogus"]).status.success());
    assert!(!rsk_traj(&["frobnicate"]).status.success());
}

#[test]
fn converge_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        vec![
            "converge".to_owned(),
            "--nlist".into(),
            "50,100".into(),
            "--trials".into(),
            "8".into(),
            "--seed".into(),
            "42".into(),
            "--out".into(),
            dir.path().join(name).to_str().unwrap().to_owned(),
        ]
    };
    for name in ["a.csv", "b.csv"] {
        let a = args(name);
        assert!(rsk_traj(&a.iter().map(String::as_str).collect::<Vec<_>>())
            .status
            .success());
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let manifest = RunManifest::from_json(
        &std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.seed, Some(42));
    assert_eq!(manifest.norm, "euclidean");
    assert_eq!(manifest.grid.unwrap().len(), 21);
}

#[test]
fn replay_reproduces_trajectory_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("t.csv");
    let second = dir.path().join("replayed.csv");
    let out = rsk_traj(&[
        "trajectory",
        "--n",
        "60",
        "--w",
        "0.4",
        "--seed",
        "3",
        "--out",
        path_arg(&first),
    ]);
    assert!(out.status.success());
    let manifest = dir.path().join("t.csv.manifest.json");
    assert!(
        rsk_traj(&["replay", path_arg(&manifest), "--out", path_arg(&second)])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&first).unwrap();
    assert_eq!(text, std::fs::read_to_string(&second).unwrap());
    let rows: Vec<TrajectoryRow> = read_csv(&text).unwrap();
    assert_eq!(rows.first().unwrap().j, 60);
    assert_eq!(rows.last().unwrap().j, 180);
}

#[test]
fn seed_flag_overrides_environment() {
    let run = |env: Option<&str>, seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rsk-traj"));
        cmd.args(["trajectory", "--n", "30", "--w", "0.5"]);
        if let Some(s) = seed {
            cmd.args(["--seed", s]);
        }
        match env {
            Some(v) => cmd.env("RSK_TRAJ_SEED", v),
            None => cmd.env_remove("RSK_TRAJ_SEED"),
        };
        stdout(&cmd.output().unwrap())
    };
    assert_eq!(run(Some("9"), None), run(None, Some("9")));
    assert_eq!(run(Some("9"), Some("4")), run(None, Some("4")));
    assert_ne!(run(Some("9"), None), run(Some("8"), None));
}

#[test]
fn asympt_and_probe_emit_csv() {
    let out = rsk_traj(&["asympt"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 9);
    let out = rsk_traj(&["probe-column", "--n", "10", "--trials", "20", "--seed", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("T,steps,trials,fraction\n"));
}
