use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::forest::{fit_forest, ForestParams};
use super::tree::TreeParams;
use crate::error::{Error, Result};
use crate::math;
use crate::rng;

/// Seeded shuffle of `0..n_rows`, first `round(ratio n)` indices for training.
pub fn train_val_split(n_rows: usize, ratio: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::param("ratio", ratio, "must lie in (0, 1)"));
    }
    let mut idx: Vec<usize> = (0..n_rows).collect();
    idx.shuffle(&mut rng::seeded(seed));
    let n_train = math::round(ratio * n_rows as f64) as usize;
    if n_train == 0 || n_train == n_rows {
        return Err(Error::DegenerateSplit { train: n_train, validation: n_rows - n_train });
    }
    let val = idx.split_off(n_train);
    Ok((idx, val))
}

pub fn mse(pred: &[f64], y: &[f64]) -> f64 {
    pred.iter().zip(y).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / y.len() as f64
}

/// Coefficient of determination; `NaN` when the targets are constant.
pub fn r2(pred: &[f64], y: &[f64]) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|t| (t - mean) * (t - mean)).sum();
    let ss_res: f64 = pred.iter().zip(y).map(|(p, t)| (p - t) * (p - t)).sum();
    if ss_tot == 0.0 {
        f64::NAN
    } else {
        1.0 - ss_res / ss_tot
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuningGrid {
    pub max_depth: Vec<Option<usize>>,
    pub min_samples_split: Vec<usize>,
}

impl Default for TuningGrid {
    fn default() -> Self {
        Self { max_depth: alloc::vec![Some(3), Some(5), Some(8), Some(12), None], min_samples_split: alloc::vec![2, 5, 10] }
    }
}

impl TuningGrid {
    pub fn candidates(&self, base: &TreeParams) -> Vec<TreeParams> {
        self.max_depth
            .iter()
            .flat_map(|&d| self.min_samples_split.iter().map(move |&m| TreeParams { max_depth: d, min_samples_split: m, ..*base }))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuningResult {
    pub best: TreeParams,
    /// Validation MSE per candidate, in grid order.
    pub scores: Vec<(TreeParams, f64)>,
}

/// Validation MSE of a forest fitted with `params` on the training rows.
pub fn validation_mse(
    train: (&[Vec<f64>], &[f64]),
    val: (&[Vec<f64>], &[f64]),
    params: &ForestParams,
    seed: u64,
) -> Result<f64> {
    let f = fit_forest(train.0, train.1, params, seed)?;
    let pred: Vec<f64> = val.0.iter().map(|r| f.predict(r)).collect::<Result<_>>()?;
    Ok(mse(&pred, val.1))
}

/// Picks depth and split size by validation MSE; ties keep the earlier candidate.
pub fn tune_forest(
    train: (&[Vec<f64>], &[f64]),
    val: (&[Vec<f64>], &[f64]),
    base: &ForestParams,
    grid: &TuningGrid,
    seed: u64,
) -> Result<TuningResult> {
    let scores = grid
        .candidates(&base.tree)
        .into_iter()
        .map(|tp| Ok((tp, validation_mse(train, val, &ForestParams { tree: tp, ..*base }, seed)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TuningResult { best: select_best(&scores).unwrap_or(base.tree), scores })
}

pub(crate) fn select_best(scores: &[(TreeParams, f64)]) -> Option<TreeParams> {
    scores.iter().fold(None::<(TreeParams, f64)>, |acc, &(p, s)| match acc {
        Some((_, b)) if !(s < b) => acc,
        _ => Some((p, s)),
    })
    .map(|(p, _)| p)
}
