//! Tree-ensemble surrogate of sweep datasets: CART regression trees, bagged
//! forests, impurity and permutation importance, Shapley attributions and
//! hyperparameter selection on a train/validation split.

mod forest;
mod importance;
mod shapley;
mod tree;
mod validation;

pub use forest::{fit_forest, fit_forest_tree, tree_seed, Forest, ForestParams};
pub use importance::{impurity_importance, permutation_importance, ImportanceReport};
pub use shapley::{shapley_values, tree_shapley, ShapReport, ShapleyMode, MAX_EXACT_FEATURES};
pub use tree::{fit_tree, Tree, TreeNode, TreeParams};
pub use validation::{mse, r2, train_val_split, tune_forest, validation_mse, TuningGrid, TuningResult};

use crate::error::{Error, Result};

/// Checks the feature matrix is non-empty, rectangular and matches the targets.
pub(crate) fn check_matrix(features: &[alloc::vec::Vec<f64>], targets: &[f64]) -> Result<usize> {
    let first = features.first().ok_or(Error::EmptyData)?;
    if targets.len() != features.len() {
        return Err(Error::ArityMismatch { expected: features.len(), got: targets.len() });
    }
    let arity = first.len();
    if let Some(row) = features.iter().find(|r| r.len() != arity) {
        return Err(Error::ArityMismatch { expected: arity, got: row.len() });
    }
    Ok(arity)
}
