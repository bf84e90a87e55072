//! The analysis workflow on top of the core numerics: parallel sweeps,
//! forest fitting, tuning, importances and Shapley reports.

use rand::seq::index;
use rayon::prelude::*;
use taskgrowth_core::dynamics::{simulate, Scenario, ShockSchedule, SimConfig, Trajectory};
use taskgrowth_core::production::StaticsRow;
use taskgrowth_core::rng::{derive_seed, seeded};
use taskgrowth_core::surrogate::{
    fit_forest_tree, impurity_importance, mse, permutation_importance, r2, train_val_split, tree_shapley, Forest,
    ForestParams, ImportanceReport, TreeParams, TuningGrid, tree_seed,
};
use taskgrowth_core::sweep::{
    ranks, run_sample, sample_params, ParamRange, Sampling, SweepDataset, SweepOutcome, SweepRow, Target,
};
use taskgrowth_core::ParamName;

use crate::config::{Config, SurrogateConfig};
use crate::error::{Error, Result};
use crate::tables::ShapEntry;

pub fn statics(cfg: &Config, grid: usize) -> Result<Vec<StaticsRow>> {
    let p = cfg.model_params();
    let econ = p.resolve()?;
    let model = econ.static_model(p.knowledge0, p.task_mass0);
    Ok(model.statics_sweep(grid, cfg.statics.ky_threshold)?)
}

pub fn run_simulation(cfg: &Config, scenario: Scenario, shocks: ShockSchedule) -> Result<Trajectory> {
    let mut sim = cfg.sim_config()?;
    scenario.apply(&mut sim.params);
    sim.params.resolve()?;
    sim.shocks = shocks;
    Ok(simulate(&sim)?)
}

/// Row-parallel sweep; rows come back ordered by `sample_id`.
pub fn parallel_sweep(samples: &[Vec<f64>], ranges: &[ParamRange], base: &SimConfig, seed: u64) -> SweepOutcome {
    let results: Vec<_> =
        samples.par_iter().enumerate().map(|(id, values)| run_sample(id, seed, values, ranges, base)).collect();
    let mut out = SweepOutcome::default();
    for (row, failure) in results {
        out.dataset.rows.push(row);
        out.failures.extend(failure);
    }
    out
}

pub fn sweep(cfg: &Config, n: usize, seed: u64, sampling: Sampling) -> Result<SweepOutcome> {
    let base = cfg.sim_config()?;
    base.params.resolve()?;
    let ranges = cfg.ranges()?;
    let samples = sample_params(&ranges, n, seed, sampling)?;
    Ok(parallel_sweep(&samples, &ranges, &base, seed))
}

/// Same trees as the sequential core fit, built in parallel.
pub fn fit_forest(features: &[Vec<f64>], targets: &[f64], params: &ForestParams, seed: u64) -> Result<Forest> {
    if features.len() < 2 {
        return Err(taskgrowth_core::Error::EmptyData.into());
    }
    let n = params.n_trees.max(1);
    let trees = (0..n)
        .into_par_iter()
        .map(|i| fit_forest_tree(features, targets, params, seed, i))
        .collect::<taskgrowth_core::Result<Vec<_>>>()?;
    let seeds = (0..n).map(|i| tree_seed(seed, i)).collect();
    Ok(Forest::from_trees(trees, seeds, *params)?)
}

fn predict_all(forest: &Forest, x: &[Vec<f64>]) -> Vec<f64> {
    x.iter().map(|r| forest.predict_unchecked(r)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub tree: TreeParams,
    pub validation_mse: f64,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub target: Target,
    pub n_rows: usize,
    pub n_converged: usize,
    pub train_ids: Vec<usize>,
    pub validation_ids: Vec<usize>,
    pub tuning: Vec<Candidate>,
    pub best: TreeParams,
    pub forest: Forest,
    pub importance: ImportanceReport,
    pub train_mse: f64,
    pub validation_mse: f64,
    pub validation_r2: f64,
    pub shap_base: f64,
    pub shap: Vec<ShapEntry>,
    /// Largest `|base + Σφ - prediction|` over the explained rows.
    pub shap_efficiency_gap: f64,
}

fn matrix(rows: &[&SweepRow], target: Target) -> (Vec<Vec<f64>>, Vec<f64>) {
    rows.iter().map(|r| (r.features.to_vec(), target.of(r))).unzip()
}

/// Percentile in `[0, 100]` of each value within `x`, ties sharing their mean rank.
pub fn percentiles(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![50.0; n];
    }
    ranks(x).into_iter().map(|r| 100.0 * (r - 1.0) / (n - 1) as f64).collect()
}

/// Fits the surrogate on the converged rows and explains it.
pub fn analyze(ds: &SweepDataset, target: Target, sc: &SurrogateConfig, seed: u64) -> Result<Analysis> {
    let rows: Vec<&SweepRow> = ds.converged().filter(|r| target.of(r).is_finite()).collect();
    if rows.len() < sc.min_converged.max(2) {
        return Err(Error::InsufficientData { converged: rows.len(), required: sc.min_converged.max(2) });
    }
    let (train_idx, val_idx) = train_val_split(rows.len(), sc.train_ratio, derive_seed(seed, 0))?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| rows[i]).collect::<Vec<_>>();
    let (train_rows, val_rows) = (pick(&train_idx), pick(&val_idx));
    let (tx, ty) = matrix(&train_rows, target);
    let (vx, vy) = matrix(&val_rows, target);

    let base = ForestParams { n_trees: sc.n_trees, ..ForestParams::default() };
    let grid = TuningGrid { max_depth: sc.max_depth_grid.clone(), min_samples_split: sc.min_samples_split_grid.clone() };
    let candidates = grid_or_base(&grid, &base);
    let mut tuning: Vec<Candidate> = Vec::with_capacity(candidates.len());
    let mut best: Option<(Forest, usize)> = None;
    for tree in candidates {
        let forest = fit_forest(&tx, &ty, &ForestParams { tree, ..base }, seed)?;
        let validation_mse = mse(&predict_all(&forest, &vx), &vy);
        if best.as_ref().is_none_or(|(_, b)| validation_mse < tuning[*b].validation_mse) {
            best = Some((forest, tuning.len()));
        }
        tuning.push(Candidate { tree, validation_mse });
    }
    let (forest, best_i) = best.expect("at least one candidate");
    let best_tree = tuning[best_i].tree;

    let mut importance = impurity_importance(&forest);
    importance.permutation = Some(permutation_importance(&forest, &vx, &vy, sc.permutation_repeats, derive_seed(seed, 1))?);
    let val_pred = predict_all(&forest, &vx);

    let n_bg = sc.background.clamp(1, tx.len());
    let mut g = seeded(derive_seed(seed, 2));
    let mut bg_idx = index::sample(&mut g, tx.len(), n_bg).into_vec();
    bg_idx.sort_unstable();
    let background: Vec<Vec<f64>> = bg_idx.iter().map(|&i| tx[i].clone()).collect();

    let reports = rows
        .par_iter()
        .map(|r| tree_shapley(&forest, &r.features, &background))
        .collect::<taskgrowth_core::Result<Vec<_>>>()?;
    let shap_base = reports.first().map_or(f64::NAN, |r| r.base);
    let shap_efficiency_gap = reports.iter().map(|r| r.efficiency_gap().abs()).fold(0.0, f64::max);
    let pct: Vec<Vec<f64>> =
        (0..ParamName::ALL.len()).map(|f| percentiles(&rows.iter().map(|r| r.features[f]).collect::<Vec<_>>())).collect();
    let mut shap = Vec::with_capacity(rows.len() * ParamName::ALL.len());
    for (k, (row, rep)) in rows.iter().zip(&reports).enumerate() {
        for (f, name) in ParamName::ALL.iter().enumerate() {
            shap.push(ShapEntry {
                sample_id: row.sample_id,
                feature: *name,
                value: row.features[f],
                percentile: pct[f][k],
                shap: rep.values[f],
            });
        }
    }

    Ok(Analysis {
        target,
        n_rows: ds.rows.len(),
        n_converged: rows.len(),
        train_ids: train_rows.iter().map(|r| r.sample_id).collect(),
        validation_ids: val_rows.iter().map(|r| r.sample_id).collect(),
        best: best_tree,
        train_mse: mse(&predict_all(&forest, &tx), &ty),
        validation_mse: mse(&val_pred, &vy),
        validation_r2: r2(&val_pred, &vy),
        tuning,
        forest,
        importance,
        shap_base,
        shap,
        shap_efficiency_gap,
    })
}

fn grid_or_base(grid: &TuningGrid, base: &ForestParams) -> Vec<TreeParams> {
    if grid.max_depth.is_empty() || grid.min_samples_split.is_empty() {
        vec![base.tree]
    } else {
        grid.candidates(&base.tree)
    }
}

impl Analysis {
    /// Validation metrics and tuning results as a JSON document.
    pub fn metrics_json(&self) -> serde_json::Value {
        let depth = |d: Option<usize>| d.map_or(serde_json::Value::Null, |d| d.into());
        let ranking: Vec<&str> = self.importance.ranking().iter().map(|&i| ParamName::ALL[i].as_str()).collect();
        serde_json::json!({
            "target": target_name(self.target),
            "rows": self.n_rows,
            "converged_rows": self.n_converged,
            "converged_fraction": self.n_converged as f64 / self.n_rows.max(1) as f64,
            "train_rows": self.train_ids.len(),
            "validation_rows": self.validation_ids.len(),
            "n_trees": self.forest.trees.len(),
            "best_max_depth": depth(self.best.max_depth),
            "best_min_samples_split": self.best.min_samples_split,
            "train_mse": self.train_mse,
            "validation_mse": self.validation_mse,
            "validation_r2": self.validation_r2,
            "shap_base": self.shap_base,
            "shap_max_efficiency_gap": self.shap_efficiency_gap,
            "impurity_ranking": ranking,
            "tuning": self.tuning.iter().map(|c| serde_json::json!({
                "max_depth": depth(c.tree.max_depth),
                "min_samples_split": c.tree.min_samples_split,
                "validation_mse": c.validation_mse,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn target_name(t: Target) -> &'static str {
    match t {
        Target::Wage => "w",
        Target::LaborShare => "s_L",
    }
}

pub fn parse_target(s: &str) -> Option<Target> {
    match s {
        "w" => Some(Target::Wage),
        "s_L" => Some(Target::LaborShare),
        _ => None,
    }
}
