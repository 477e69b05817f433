use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn ampdamp(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ampdamp"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--output")
        .arg(out)
        .output()
        .unwrap()
}

fn scenario(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("scenario.json");
    std::fs::write(&path, body).unwrap();
    path
}

const VACUUM: &str = r#"{
  "system": {
    "mode1": { "mass": 1.0, "omega": 2.0, "kappa": 0.7 },
    "mode2": { "mass": 3.0, "omega": 0.5, "kappa": 0.1 }
  },
  "initial": { "kind": "vacuum" },
  "time_grid": { "t_start": 0.0, "t_end": 4.0, "n_steps": 8 }
}"#;

#[test]
fn vacuum_rows_are_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = ampdamp(&["evolve"], &scenario(dir.path(), VACUUM), dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).map(|l| l.split_once(',').unwrap().1).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| *r == rows[0]));
}

#[test]
fn both_engines_agree_on_coherent_input() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{
      "system": {
        "mode1": { "mass": 1.0, "omega": 1.0, "kappa": 0.5 },
        "mode2": { "mass": 1.0, "omega": 1.0, "kappa": 0.5 }
      },
      "initial": { "kind": "coherent", "alpha1": [1.0, 0.0], "alpha2": [1.0, 0.0] },
      "time_grid": { "t_start": 0.0, "t_end": 3.0, "n_steps": 6 },
      "engine": "both",
      "fock_dim": 32
    }"#;
    let out = ampdamp(&["evolve"], &scenario(dir.path(), body), dir.path());
    assert!(out.status.success());
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    let line = summary.lines().find(|l| l.starts_with("oracle max deviation")).unwrap();
    let dev: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(dev <= 1e-8, "{dev}");
}

#[test]
fn every_subcommand_writes_its_files() {
    let cases: [(&str, &[&str]); 4] = [
        ("evolve", &["trajectory.csv", "summary.txt"]),
        ("oracle", &["oracle.csv", "summary.txt"]),
        ("structure", &["structure.csv", "structure.txt"]),
        ("classicality", &["restarts.csv", "classicality.txt"]),
    ];
    for (cmd, files) in cases {
        let dir = tempfile::tempdir().unwrap();
        let out = ampdamp(&[cmd], &data("golden_scenario.json"), dir.path());
        // The golden scenario has a moment-only initial state, which the
        // oracle cannot use.
        if cmd == "oracle" {
            assert_eq!(out.status.code(), Some(2));
            continue;
        }
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        for f in files {
            assert!(dir.path().join(f).is_file(), "{cmd} did not write {f}");
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let out = ampdamp(&["oracle"], &scenario(dir.path(), VACUUM), dir.path());
    assert!(out.status.success());
    assert!(dir.path().join("oracle.csv").is_file());
}

#[test]
fn seed_flag_changes_the_search_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario(dir.path(), VACUUM);
    let run = |seed: &str| {
        let out_dir = dir.path().join(seed);
        assert!(ampdamp(&["classicality", "--seed", seed], &cfg, &out_dir)
            .status
            .success());
        std::fs::read_to_string(out_dir.join("restarts.csv")).unwrap()
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");

    let bad_json = scenario(dir.path(), "{ \"system\": ");
    assert_eq!(ampdamp(&["evolve"], &bad_json, &out_dir).status.code(), Some(1));

    let unknown_field = scenario(dir.path(), &VACUUM.replace("\"initial\"", "\"intial\""));
    assert_eq!(ampdamp(&["evolve"], &unknown_field, &out_dir).status.code(), Some(1));

    let out = ampdamp(&["evolve"], &data("negative_kappa.json"), &out_dir);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("system.mode1") && stderr.contains("kappa"), "{stderr}");

    let zero_steps = scenario(dir.path(), &VACUUM.replace("\"n_steps\": 8", "\"n_steps\": 0"));
    assert_eq!(ampdamp(&["evolve"], &zero_steps, &out_dir).status.code(), Some(2));

    let no_lct = scenario(dir.path(), VACUUM);
    assert_eq!(ampdamp(&["structure"], &no_lct, &out_dir).status.code(), Some(2));

    let missing = dir.path().join("does-not-exist.json");
    assert_eq!(ampdamp(&["evolve"], &missing, &out_dir).status.code(), Some(3));

    let blocker = dir.path().join("a-file");
    std::fs::write(&blocker, "").unwrap();
    assert_eq!(ampdamp(&["evolve"], &no_lct, &blocker).status.code(), Some(3));

    assert!(!out_dir.exists(), "failed runs must not create output");

    let help = Command::new(env!("CARGO_BIN_EXE_ampdamp"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(help.status.code(), Some(0));
    let unknown = Command::new(env!("CARGO_BIN_EXE_ampdamp"))
        .arg("bogus")
        .output()
        .unwrap();
    assert_eq!(unknown.status.code(), Some(1));
}
