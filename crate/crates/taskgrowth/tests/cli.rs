use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use taskgrowth::manifest::RunManifest;
use taskgrowth::tables::{self, DATASET_HEADER, IMPORTANCE_HEADER, SHAP_HEADER, STATICS_HEADER, TRAJECTORY_HEADER};
use taskgrowth_core::sweep::{SweepDataset, SweepRow};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_taskgrowth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn read_table(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn statics_baseline_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("st");
    let o = run(&["statics", "--grid", "33", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_table(&out.join("statics.csv"));
    assert_eq!(header, STATICS_HEADER);
    assert_eq!(rows.len(), 33);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[32][0], 1.0);
    let m = RunManifest::read(&out).unwrap();
    assert_eq!(m.command, "statics");
    assert_eq!(m.config.statics.grid, 33);
    assert_eq!(m.outputs, vec!["statics.csv"]);
}

#[test]
fn statics_wage_hump_for_constant_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"K_over_L": 3, "S_R": 0, "L_bar": 1, "K0": 1, "sigma": 2,
            "profiles": {"capital": {"kind": "constant"}, "labor": {"kind": "constant"}}}"#,
    );
    let out = dir.path().join("st");
    let o = run(&["statics", "--config", s(&cfg), "--grid", "51", "--out", s(&out), "--plots"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (_, rows) = read_table(&out.join("statics.csv"));
    let w: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let argmax = (0..w.len()).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
    assert!(argmax > 0 && argmax < w.len() - 1, "argmax at {argmax}");
    // w(z) = sqrt(3 z + 1 - z) * sqrt(1 - z) / (1 - z) at grid points 0, 0.2, 0.8
    assert_eq!(w[0], 1.0);
    assert!((w[10] - 1.49282032).abs() < 1e-8);
    assert!((w[40] - 0.892820323).abs() < 1e-8);
    assert!(out.join("statics_w.svg").exists());
}

#[test]
fn config_and_domain_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let sigma_one = write_config(dir.path(), "s.json", r#"{"sigma": 1.0}"#);
    let o = run(&["statics", "--config", s(&sigma_one), "--out", s(&out)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("sigma"), "{}", stderr(&o));

    let broken = write_config(dir.path(), "b.json", r#"{"sigma": "#);
    assert_eq!(code(&run(&["statics", "--config", s(&broken), "--out", s(&out)])), 2);
    let unknown = write_config(dir.path(), "u.json", r#"{"sigmaa": 2}"#);
    assert_eq!(code(&run(&["simulate", "--config", s(&unknown), "--out", s(&out)])), 2);
    assert_eq!(code(&run(&["simulate", "--scenario", "bogus", "--out", s(&out)])), 2);
    assert_eq!(code(&run(&["simulate", "--shock", "theta:1.1@[0,1)", "--out", s(&out)])), 2);
    let missing = dir.path().join("nope.json");
    assert_ne!(code(&run(&["statics", "--config", s(&missing), "--out", s(&out)])), 0);
}

#[test]
fn non_finite_state_reports_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"zeta": 1000, "phi": 1, "kappa": 0, "lambda": 0}"#);
    let o = run(&["simulate", "--config", s(&cfg), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("at step"), "{}", stderr(&o));
}

#[test]
fn static_scenario_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s0");
    let o = run(&["simulate", "--scenario", "0", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_table(&out.join("trajectory.csv"));
    assert_eq!(header, TRAJECTORY_HEADER);
    assert_eq!(rows.len(), 501);
    for col in 1..11 {
        assert!(rows.iter().all(|r| r[col] == rows[0][col]), "column {col} moves");
    }
}

#[test]
fn full_scenario_frontier_rises_after_transient() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("full");
    let o = run(&["simulate", "--scenario", "full", "--out", s(&out), "--plots"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (_, rows) = read_table(&out.join("trajectory.csv"));
    let z: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let after = z.len() / 10;
    assert!(z[after..].windows(2).all(|p| p[1] >= p[0] - 1e-9), "z* decreases after the transient");
    assert!(z[z.len() - 1] > z[after]);
    for f in ["phase_w_z.svg", "trajectory_w.svg", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn shock_twins_move_wage_in_opposite_directions() {
    let dir = tempfile::tempdir().unwrap();
    let wage_at = |name: &str, shock: Option<&str>| -> f64 {
        let out = dir.path().join(name);
        let mut args = vec!["simulate", "--out", s(&out)];
        if let Some(sh) = shock {
            args.extend(["--shock", sh]);
        }
        let o = bin().args(&args).output().unwrap();
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let (_, rows) = read_table(&out.join("trajectory.csv"));
        rows[249][6]
    };
    let base = wage_at("base", None);
    let up = wage_at("up", Some("K_over_L,theta:*1.10@[15,25)"));
    let down = wage_at("down", Some("K_over_L,theta:*0.90@[15,25)"));
    assert!((up - base) * (down - base) < 0.0, "base={base} up={up} down={down}");
}

#[test]
fn sweep_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"simulation": {"horizon": 3}}"#);
    let sweep = |name: &str, threads: &str| -> Vec<u8> {
        let out = dir.path().join(name);
        let o = bin()
            .args(["sweep", "--config", s(&cfg), "--n", "16", "--seed", "7", "--out", s(&out)])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        std::fs::read(out.join("dataset.csv")).unwrap()
    };
    let a = sweep("a", "1");
    let b = sweep("b", "1");
    let c = sweep("c", "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(DATASET_HEADER));
    assert_eq!(text.lines().count(), 17);
    let ds = tables::read_dataset(&dir.path().join("a/dataset.csv")).unwrap();
    assert_eq!(ds.rows.iter().map(|r| r.sample_id).collect::<Vec<_>>(), (0..16).collect::<Vec<_>>());
    let m = RunManifest::read(&dir.path().join("a")).unwrap();
    assert_eq!(m.seed, Some(7));
    assert_eq!(m.inputs.len(), 1);
    assert!(dir.path().join("a/failures.csv").exists());
}

fn synthetic_dataset(n: usize, converged: usize) -> SweepDataset {
    let rows = (0..n)
        .map(|i| {
            let mut features = [0.0; 14];
            for (k, f) in features.iter_mut().enumerate() {
                *f = ((i * (k + 3) * 7919) % 101) as f64 / 100.0;
            }
            let kl = 1.0 + 4.0 * features[13];
            SweepRow {
                sample_id: i,
                seed: 1,
                features,
                wage: 1.0 + 0.1 * features[1],
                labor_share: 1.0 / (1.0 + kl) + 0.01 * features[0],
                z_star: kl / (1.0 + kl),
                output: 1.0,
                g_output: 0.0,
                converged: i < converged,
            }
        })
        .collect();
    SweepDataset { rows }
}

fn write_dataset(path: &Path, ds: &SweepDataset) {
    tables::write_file(path, |w| tables::write_dataset(w, ds)).unwrap();
}

#[test]
fn analyze_needs_twenty_converged_rows() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    write_dataset(&data, &synthetic_dataset(10, 5));
    let o = run(&["analyze", "--dataset", s(&data), "--out", s(&dir.path().join("a"))]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
}

#[test]
fn analyze_rejects_malformed_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    std::fs::write(&data, "sample_id,seed\n0,1\n").unwrap();
    let o = run(&["analyze", "--dataset", s(&data), "--out", s(&dir.path().join("a"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("malformed header"));
}

#[test]
fn analyze_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    write_dataset(&data, &synthetic_dataset(80, 60));
    let cfg = write_config(dir.path(), "c.json", r#"{"surrogate": {"n_trees": 20, "max_depth_grid": [3, null], "min_samples_split_grid": [2]}}"#);
    let out = dir.path().join("a");
    let o = run(&["analyze", "--dataset", s(&data), "--config", s(&cfg), "--target", "s_L", "--out", s(&out), "--plots"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let imp = std::fs::read_to_string(out.join("importance.csv")).unwrap();
    let mut lines = imp.lines();
    assert_eq!(lines.next().unwrap(), IMPORTANCE_HEADER);
    let total: f64 = lines.clone().map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-7);
    assert_eq!(lines.count(), 14);

    let shap = std::fs::read_to_string(out.join("shap.csv")).unwrap();
    assert_eq!(shap.lines().next().unwrap(), SHAP_HEADER);
    assert_eq!(shap.lines().count(), 1 + 60 * 14);

    let metrics: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["converged_rows"], 60);
    assert_eq!(metrics["train_rows"], 48);
    assert_eq!(metrics["validation_rows"], 12);
    assert_eq!(metrics["tuning"].as_array().unwrap().len(), 2);
    assert!(metrics["shap_max_efficiency_gap"].as_f64().unwrap() < 1e-9);
    assert_eq!(metrics["impurity_ranking"][0], "K_over_L");
    assert!(out.join("shap.svg").exists());

    let m = RunManifest::read(&out).unwrap();
    assert_eq!(m.inputs.len(), 2);
    assert_eq!(m.seed, Some(0));
}
