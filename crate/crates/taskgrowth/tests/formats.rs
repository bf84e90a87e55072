use std::path::Path;

use taskgrowth::tables::{self, sig, STATICS_HEADER};
use taskgrowth::{pipeline, Config};
use taskgrowth_core::rng::seeded;
use taskgrowth_core::sweep::{SweepDataset, SweepRow};

use rand::Rng;

fn random_dataset(n: usize, seed: u64) -> SweepDataset {
    let mut g = seeded(seed);
    let rows = (0..n)
        .map(|i| {
            let mut features = [0.0; 14];
            features.iter_mut().for_each(|f| *f = g.gen::<f64>() * 10f64.powi(g.gen_range(-8..8)));
            SweepRow {
                sample_id: i,
                seed,
                features,
                wage: g.gen(),
                labor_share: g.gen(),
                z_star: g.gen(),
                output: g.gen::<f64>() * 1e6,
                g_output: -g.gen::<f64>() * 1e-9,
                converged: g.gen_bool(0.3),
            }
        })
        .collect();
    SweepDataset { rows }
}

#[test]
fn five_hundred_row_dataset_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let ds = random_dataset(500, 11);
    tables::write_file(&path, |w| tables::write_dataset(w, &ds)).unwrap();
    let back = tables::read_dataset(&path).unwrap();
    assert_eq!(back, ds);
    assert_eq!(back.converged().count(), ds.converged().count());
}

#[test]
fn statics_table_uses_nine_significant_digits() {
    let rows = pipeline::statics(&Config::default(), 5).unwrap();
    let mut buf = Vec::new();
    tables::write_statics(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(STATICS_HEADER));
    let second: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    assert_eq!(second.len(), 7);
    assert_eq!(second[0], "0.250000000");
    assert_eq!(second[3], sig(rows[1].eq.wage, 9));
    let digits = second[3].chars().filter(char::is_ascii_digit).collect::<String>();
    assert_eq!(digits.trim_start_matches('0').len(), 9);
}

#[test]
fn trajectory_has_one_record_per_step() {
    let mut cfg = Config::default();
    cfg.simulation.horizon = 2.0;
    cfg.simulation.dt = 0.25;
    let traj = pipeline::run_simulation(&cfg, taskgrowth_core::dynamics::Scenario::Full, Default::default()).unwrap();
    let mut buf = Vec::new();
    tables::write_trajectory(&mut buf, &traj).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 9);
}

#[test]
fn missing_dataset_is_an_io_error() {
    let e = tables::read_dataset(Path::new("/nonexistent/d.csv")).unwrap_err();
    assert_eq!(e.exit_code(), 1);
}
