//! End-to-end CLI behavior: flag spellings, exit codes, config precedence,
//! and output formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fluxriver")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("FLUXRIVER_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Generates a small bundle into the given directory and returns the CSV
/// paths.
fn synth_small(dir: &Path) -> (PathBuf, PathBuf) {
    let out = run(&[
        "synth",
        "--seed",
        "5",
        "--m",
        "14",
        "--n",
        "12",
        "--k",
        "4",
        "--noise",
        "0.4",
        "--change-points",
        "6",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "synth failed: {}", stderr(&out));
    (dir.join("predictions.csv"), dir.join("models.csv"))
}

#[test]
fn validate_reports_dimensions_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let out = run(&[
        "validate",
        "--predictions",
        preds.to_str().unwrap(),
        "--models",
        models.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("14 models, 12 steps, 4 moods\n"), "{text}");
    assert!(text.contains("moods: delighted, angry, sad, calm"));
    assert!(text.contains("per-step unweighted totals: 14 (uniform)"));
}

#[test]
fn validate_rejects_missing_cell_with_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let text = std::fs::read_to_string(&preds).unwrap();
    // drop one data row to break completeness
    let mut lines: Vec<&str> = text.lines().collect();
    let removed = lines.remove(5);
    std::fs::write(&preds, format!("{}\n", lines.join("\n"))).unwrap();
    let out = run(&[
        "validate",
        "--predictions",
        preds.to_str().unwrap(),
        "--models",
        models.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("missing cell"), "stderr: {err}, removed {removed}");
}

#[test]
fn validate_rejects_unknown_mood() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let text = std::fs::read_to_string(&preds).unwrap();
    let broken = text.replacen("angry", "joyful", 1);
    assert_ne!(text, broken);
    std::fs::write(&preds, broken).unwrap();
    let out = run(&[
        "validate",
        "--predictions",
        preds.to_str().unwrap(),
        "--models",
        models.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown mood"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["river", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_is_deterministic_and_respects_dimensions() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    synth_small(dir_a.path());
    synth_small(dir_b.path());
    for name in ["predictions.csv", "models.csv", "bundle.json", "synthspec.json"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across identical runs");
    }
    // m and n flags land in the output dimensions
    let text = std::fs::read_to_string(dir_a.path().join("predictions.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 14 * 12);
}

#[test]
fn synth_preset_is_available_and_seed_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "synth",
        "--preset",
        "appassionata-like",
        "--seed",
        "99",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let spec = std::fs::read_to_string(dir.path().join("synthspec.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&spec).unwrap();
    assert_eq!(value["seed"], 99);
    assert_eq!(value["m"], 210);
    assert_eq!(value["n"], 30);

    let bad = run(&["synth", "--preset", "nope", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn decide_prints_per_step_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let out = run(&[
        "decide",
        "--predictions",
        preds.to_str().unwrap(),
        "--models",
        models.to_str().unwrap(),
        "--weighting",
        "alpha2",
        "--basis",
        "precision",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "time_step,mood");
    assert_eq!(lines.len(), 1 + 12);
    assert!(lines[1].starts_with("1,"));
    let moods = ["delighted", "angry", "sad", "calm"];
    for line in &lines[1..] {
        let (_, mood) = line.split_once(',').unwrap();
        assert!(moods.contains(&mood), "unexpected mood {mood}");
    }
}

#[test]
fn river_accepts_every_flag_combination() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let mut idx = 0;
    for design in ["stacked", "themeriver", "dualflux"] {
        for weighting in ["none", "alpha", "alpha2", "alpha3", "acc", "acc2", "f1"] {
            for basis in ["precision", "recall"] {
                let out_path = dir.path().join(format!("r{idx}.svg"));
                idx += 1;
                let mut args = vec![
                    "river",
                    "--predictions",
                    preds.to_str().unwrap(),
                    "--models",
                    models.to_str().unwrap(),
                    "--design",
                    design,
                    "--weighting",
                    weighting,
                    "--basis",
                    basis,
                    "--smoothing",
                    "smooth",
                    "--out",
                    out_path.to_str().unwrap(),
                ];
                if idx % 2 == 0 {
                    args.push("--normalize");
                }
                let out = run(&args);
                assert!(out.status.success(), "{design}/{weighting}: {}", stderr(&out));
                let svg = std::fs::read_to_string(&out_path).unwrap();
                assert!(svg.starts_with("<?xml"));
                assert!(svg.ends_with("</svg>\n"));
            }
        }
    }
}

#[test]
fn pixels_accepts_every_sort_and_weight_flag() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    for sort in ["accuracy", "method-interval", "interval-accuracy"] {
        let out_path = dir.path().join(format!("p_{sort}.svg"));
        let out = run(&[
            "pixels",
            "--predictions",
            preds.to_str().unwrap(),
            "--models",
            models.to_str().unwrap(),
            "--sort",
            sort,
            "--weights",
            "1",
            "--weights",
            "2",
            "--weights",
            "3",
            "--with-river",
            "--weighting",
            "alpha2",
            "--legend",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{sort}: {}", stderr(&out));
        let svg = std::fs::read_to_string(&out_path).unwrap();
        assert!(svg.contains("id=\"pred-grid\""));
        assert!(svg.contains("id=\"weight-grid\""));
        assert!(svg.contains("id=\"side-bar\""));
        assert!(svg.contains("id=\"legend\""));
    }
    // no flags: prediction grid only
    let plain = dir.path().join("plain.svg");
    let out = run(&[
        "pixels",
        "--predictions",
        preds.to_str().unwrap(),
        "--models",
        models.to_str().unwrap(),
        "--out",
        plain.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = std::fs::read_to_string(&plain).unwrap();
    assert!(svg.contains("id=\"pred-grid\""));
    assert!(!svg.contains("id=\"weight-grid\""));
    assert!(!svg.contains("id=\"river\""));
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let cfg_out = dir.path().join("from_config.svg");
    let config = serde_json::json!({
        "predictions": preds,
        "models": models,
        "design": "stacked",
        "weighting": "alpha2",
        "out": cfg_out,
    });
    let cfg_path = dir.path().join("run.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();

    let out = run(&["river", "--config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(cfg_out.exists());

    // a flag beats the config value
    let flag_out = dir.path().join("from_flag.svg");
    let out = run(&[
        "river",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        flag_out.to_str().unwrap(),
        "--design",
        "dualflux",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let flag_svg = std::fs::read_to_string(&flag_out).unwrap();
    let cfg_svg = std::fs::read_to_string(&cfg_out).unwrap();
    assert_ne!(flag_svg, cfg_svg, "design flag should override the config");

    // the environment variable stands in for --config
    let env_out = dir.path().join("from_env.svg");
    let status = Command::new(bin())
        .args(["river", "--out", env_out.to_str().unwrap()])
        .env("FLUXRIVER_CONFIG", &cfg_path)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(env_out.exists());
}

#[test]
fn palette_override_recolors_a_mood() {
    let dir = tempfile::tempdir().unwrap();
    let (preds, models) = synth_small(dir.path());
    let cfg_path = dir.path().join("palette.json");
    std::fs::write(
        &cfg_path,
        serde_json::json!({"palette": {"angry": "#123456"}}).to_string(),
    )
    .unwrap();
    let out_path = dir.path().join("recolored.svg");
    let out = run(&[
        "river",
        "--config",
        cfg_path.to_str().unwrap(),
        "--predictions",
        preds.to_str().unwrap(),
        "--models",
        models.to_str().unwrap(),
        "--design",
        "dualflux",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = std::fs::read_to_string(&out_path).unwrap();
    assert!(svg.contains("#123456"));
    assert!(!svg.contains("#D94A3D"));
}
