mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use vessel_synopses::synthetic;

fn synopses(args: &[&str], paths: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_synopses"));
    cmd.args(args);
    for (flag, path) in paths {
        cmd.arg(flag).arg(path);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &[synthetic::straight_track(20)]);
    let missing = dir.path().join("no_such_config.json");
    let out = synopses(&["compress"], &[("--input", &input), ("--config", &missing), ("--out", dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("no_such_config.json"), "{stderr}");
}

#[test]
fn bad_arguments_exit_with_two() {
    let out = synopses(&["tune", "--type", "fishing"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = synopses(&["eval", "--input", "/nonexistent/ais.csv"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compress_straight_track() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &[synthetic::straight_track(20)]);
    let out_dir = dir.path().join("out");
    let report = json(&synopses(&["compress"], &[("--input", &input), ("--out", &out_dir)]));
    assert_eq!(report["critical_count"], 2);
    assert_eq!(report["ratio"].as_f64(), Some(0.1));
    assert!(report["rmse_m"].as_f64().unwrap() < 0.5);

    let synopsis = std::fs::read_to_string(out_dir.join("synopsis.csv")).unwrap();
    assert_eq!(synopsis.lines().count(), 3);
    assert!(synopsis.starts_with("mmsi,timestamp,lon,lat,annotations\n"));
    assert!(out_dir.join("metrics.json").is_file());
}

#[test]
fn eval_with_json_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &[synthetic::smooth_curve_track()]);
    let config = dir.path().join("loose.json");
    let cfg = vessel_synopses::synopsis::SynopsisConfig { angle_threshold_deg: 25.0, ..Default::default() };
    std::fs::write(&config, cfg.to_json().unwrap()).unwrap();

    let loose = json(&synopses(&["eval"], &[("--input", &input), ("--config", &config)]));
    let default = json(&synopses(&["eval"], &[("--input", &input)]));
    assert!(loose["critical_count"].as_u64() < default["critical_count"].as_u64(), "{loose} {default}");
    assert_eq!(loose["config"]["angle_threshold_deg"].as_f64(), Some(25.0));
}

#[test]
fn out_of_range_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &[synthetic::corner_track()]);
    let config = dir.path().join("bad.json");
    let cfg = vessel_synopses::synopsis::SynopsisConfig { angle_threshold_deg: 95.0, ..Default::default() };
    std::fs::write(&config, cfg.to_json().unwrap()).unwrap();
    let out = synopses(&["eval"], &[("--input", &input), ("--config", &config)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_identical_configs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &synthetic::mixed_dataset(1));
    let out = json(&synopses(
        &["compare", "--config-a", "default", "--config-b", "default"],
        &[("--input", &input), ("--out", dir.path())],
    ));
    assert_eq!(out["rmse_a"], out["rmse_b"]);
    assert_eq!(out["ratio_a"], out["ratio_b"]);

    let plot = std::fs::read_to_string(dir.path().join("plot.csv")).unwrap();
    let rows: Vec<&str> = plot.lines().collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], "config,metric,value");
    assert!(dir.path().join("comparison.json").is_file());
}

#[test]
fn compare_against_fine_tuned_fishing() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    let fishing: Vec<_> = common::tuning_dataset().into_iter().filter(|t| t.vessel_type == "fishing").collect();
    common::write_dataset(&input, &fishing);
    let out = json(&synopses(
        &["compare", "--config-a", "default", "--config-b", "tuned:fishing"],
        &[("--input", &input), ("--out", dir.path())],
    ));
    assert_eq!(out["config_b"]["angle_threshold_deg"].as_f64(), Some(vessel_synopses::synopsis::SynopsisConfig::fine_tuned("fishing").unwrap().angle_threshold_deg));
    assert!(out["ratio_b"].as_f64().unwrap() > 0.0);
}

#[test]
fn tune_two_folds() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    let tracks: Vec<_> = common::tuning_dataset().into_iter().filter(|t| t.vessel_type == "tug").take(2).collect();
    common::write_dataset(&input, &tracks);
    let out_dir = dir.path().join("tune");
    let summary = json(&synopses(
        &["tune", "--type", "tug", "--r", "10", "--n", "1", "--k", "2", "--population", "8", "--generations", "3"],
        &[("--input", &input), ("--out", &out_dir)],
    ));
    assert_eq!(summary["vessel_type"], "tug");
    assert!(summary["chosen_fold"].as_u64().unwrap() < 2);

    for name in ["manifest.json", "folds.csv", "best_config.json", "summary.json"] {
        assert!(out_dir.join(name).is_file(), "{name}");
    }
    for fold in 0..2 {
        for name in ["history.csv", "best_config.json", "report.json"] {
            assert!(out_dir.join(format!("fold_{fold}")).join(name).is_file(), "fold {fold} {name}");
        }
    }
    let folds = std::fs::read_to_string(out_dir.join("folds.csv")).unwrap();
    assert_eq!(folds.lines().count(), 3);

    let too_many = synopses(
        &["tune", "--type", "tug", "--k", "3", "--population", "4", "--generations", "1"],
        &[("--input", &input), ("--out", &out_dir)],
    );
    assert_eq!(too_many.status.code(), Some(2));
}

#[test]
fn unknown_vessel_type_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &synthetic::mixed_dataset(1));
    let out = synopses(
        &["tune", "--type", "submarine", "--r", "10", "--n", "1", "--k", "2"],
        &[("--input", &input), ("--out", dir.path())],
    );
    assert_eq!(out.status.code(), Some(2));
}
