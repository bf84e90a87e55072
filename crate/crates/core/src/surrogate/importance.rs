use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::forest::Forest;
use super::tree::TreeNode;
use super::validation::mse;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceReport {
    /// Normalized total SSE decrease per feature.
    pub impurity: Vec<f64>,
    /// Mean increase in validation MSE when a feature column is shuffled.
    pub permutation: Option<Vec<f64>>,
    /// Set when the forest has no splits; `impurity` is then all zeros.
    pub no_splits: bool,
}

impl ImportanceReport {
    /// Feature indices by decreasing impurity importance, ties by index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.impurity.len()).collect();
        idx.sort_by(|&a, &b| self.impurity[b].total_cmp(&self.impurity[a]).then(a.cmp(&b)));
        idx
    }
}

pub fn impurity_importance(forest: &Forest) -> ImportanceReport {
    let mut imp = vec![0.0; forest.n_features()];
    for tree in &forest.trees {
        for node in tree.nodes() {
            if let TreeNode::Split { feature, sse_decrease, .. } = *node {
                imp[feature] += sse_decrease;
            }
        }
    }
    let total: f64 = imp.iter().sum();
    let no_splits = !(total > 0.0);
    if !no_splits {
        imp.iter_mut().for_each(|v| *v /= total);
    }
    ImportanceReport { impurity: imp, permutation: None, no_splits }
}

pub fn permutation_importance(
    forest: &Forest,
    features: &[Vec<f64>],
    targets: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let arity = super::check_matrix(features, targets)?;
    if arity != forest.n_features() {
        return Err(Error::ArityMismatch { expected: forest.n_features(), got: arity });
    }
    let predict_all = |x: &[Vec<f64>]| x.iter().map(|r| forest.predict_unchecked(r)).collect::<Vec<_>>();
    let reference = mse(&predict_all(features), targets);
    let mut g = rng::seeded(seed);
    let mut shuffled = features.to_vec();
    let repeats = repeats.max(1);
    let mut out = vec![0.0; arity];
    for (f, slot) in out.iter_mut().enumerate() {
        let mut col: Vec<f64> = features.iter().map(|r| r[f]).collect();
        for _ in 0..repeats {
            col.shuffle(&mut g);
            for (row, v) in shuffled.iter_mut().zip(&col) {
                row[f] = *v;
            }
            *slot += (mse(&predict_all(&shuffled), targets) - reference) / repeats as f64;
        }
        for (row, orig) in shuffled.iter_mut().zip(features) {
            row[f] = orig[f];
        }
    }
    Ok(out)
}
