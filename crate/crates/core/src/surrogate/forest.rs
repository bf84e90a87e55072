use alloc::vec::Vec;

use rand::Rng;

use super::tree::{fit_on, Tree, TreeParams};
use crate::error::{Error, Result};
use crate::math;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestParams {
    pub n_trees: usize,
    pub tree: TreeParams,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    /// 200 bootstrapped trees, `ceil(n_features / 3)` features per split.
    fn default() -> Self {
        Self { n_trees: 200, tree: TreeParams::default(), bootstrap: true }
    }
}

impl ForestParams {
    fn features_per_split(&self, n_features: usize) -> usize {
        self.tree
            .max_features
            .unwrap_or_else(|| math::ceil(n_features as f64 / 3.0) as usize)
            .clamp(1, n_features.max(1))
    }
}

/// Bagged ensemble; predictions are the arithmetic mean over trees.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub trees: Vec<Tree>,
    pub tree_seeds: Vec<u64>,
    pub params: ForestParams,
    n_features: usize,
}

impl Forest {
    pub fn from_trees(trees: Vec<Tree>, tree_seeds: Vec<u64>, params: ForestParams) -> Result<Self> {
        let n_features = trees.first().ok_or(Error::EmptyData)?.n_features();
        if let Some(t) = trees.iter().find(|t| t.n_features() != n_features) {
            return Err(Error::ArityMismatch { expected: n_features, got: t.n_features() });
        }
        Ok(Self { trees, tree_seeds, params, n_features })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::ArityMismatch { expected: self.n_features, got: x.len() });
        }
        Ok(self.predict_unchecked(x))
    }

    /// Mean tree output; `x` must have the training arity.
    pub fn predict_unchecked(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }
}

/// Seed used by tree `index` of a forest fitted with `seed`.
pub fn tree_seed(seed: u64, index: usize) -> u64 {
    rng::derive_seed(seed, index as u64)
}

/// Fits tree `index` of the forest; independent of every other tree.
pub fn fit_forest_tree(
    features: &[Vec<f64>],
    targets: &[f64],
    params: &ForestParams,
    seed: u64,
    index: usize,
) -> Result<Tree> {
    let arity = super::check_matrix(features, targets)?;
    let n = features.len();
    let mut g = rng::seeded(tree_seed(seed, index));
    let idx: Vec<usize> = if params.bootstrap { (0..n).map(|_| g.gen_range(0..n)).collect() } else { (0..n).collect() };
    let tree_params = TreeParams { max_features: Some(params.features_per_split(arity)), ..params.tree };
    Ok(fit_on(features, targets, idx, arity, &tree_params, &mut g))
}

pub fn fit_forest(features: &[Vec<f64>], targets: &[f64], params: &ForestParams, seed: u64) -> Result<Forest> {
    if features.len() < 2 {
        return Err(Error::EmptyData);
    }
    let trees = (0..params.n_trees.max(1))
        .map(|i| fit_forest_tree(features, targets, params, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let seeds = (0..trees.len()).map(|i| tree_seed(seed, i)).collect();
    Forest::from_trees(trees, seeds, *params)
}
