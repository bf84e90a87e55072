use alloc::vec::Vec;

use rand::seq::index;

use crate::error::Result;
use crate::rng::{self, ChaCha8Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreeNode {
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        n_samples: usize,
        /// Node SSE minus the children's SSE.
        sse_decrease: f64,
    },
    Leaf { value: f64, n_samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Features considered per split; `None` uses all.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: None, min_samples_split: 2, min_samples_leaf: 1, max_features: None }
    }
}

/// Regression tree stored as a node arena; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    n_features: usize,
}

impl Tree {
    pub fn leaf(value: f64, n_features: usize) -> Self {
        Self { nodes: alloc::vec![TreeNode::Leaf { value, n_samples: 1 }], n_features }
    }

    pub fn from_nodes(nodes: Vec<TreeNode>, n_features: usize) -> Self {
        Self { nodes, n_features }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { value, .. } => return value,
                TreeNode::Split { feature, threshold, left, right, .. } => {
                    i = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }
}

/// CART regression tree on all rows.
pub fn fit_tree(features: &[Vec<f64>], targets: &[f64], params: &TreeParams, seed: u64) -> Result<Tree> {
    let arity = super::check_matrix(features, targets)?;
    let idx: Vec<usize> = (0..features.len()).collect();
    Ok(fit_on(features, targets, idx, arity, params, &mut rng::seeded(seed)))
}

pub(crate) fn fit_on(
    x: &[Vec<f64>],
    y: &[f64],
    idx: Vec<usize>,
    n_features: usize,
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Tree {
    let mut b = Builder { x, y, n_features, params, rng, nodes: Vec::new(), order: Vec::new() };
    b.grow(idx, 0);
    Tree { nodes: b.nodes, n_features }
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    n_features: usize,
    params: &'a TreeParams,
    rng: &'a mut ChaCha8Rng,
    nodes: Vec<TreeNode>,
    order: Vec<usize>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    child_sse: f64,
}

impl Builder<'_> {
    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let n = idx.len();
        let mean = idx.iter().map(|&i| self.y[i]).sum::<f64>() / n as f64;
        let sse: f64 = idx.iter().map(|&i| (self.y[i] - mean) * (self.y[i] - mean)).sum();
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { value: mean, n_samples: n });

        let p = self.params;
        let min_leaf = p.min_samples_leaf.max(1);
        if p.max_depth.is_some_and(|d| depth >= d) || n < p.min_samples_split.max(2) || n < 2 * min_leaf || sse <= 0.0
        {
            return id;
        }
        let Some(best) = self.best_split(&idx, mean, min_leaf) else { return id };
        if !(best.child_sse < sse * (1.0 - 1e-10)) {
            return id;
        }
        let (left, right): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.x[i][best.feature] <= best.threshold);
        drop(idx);
        let l = self.grow(left, depth + 1);
        let r = self.grow(right, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
            n_samples: n,
            sse_decrease: sse - best.child_sse,
        };
        id
    }

    fn feature_subset(&mut self) -> Vec<usize> {
        match self.params.max_features {
            Some(k) if k < self.n_features => {
                let mut f = index::sample(self.rng, self.n_features, k.max(1)).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..self.n_features).collect(),
        }
    }

    /// Lowest child SSE; ties keep the lowest feature, then the lowest threshold.
    fn best_split(&mut self, idx: &[usize], mean: f64, min_leaf: usize) -> Option<Candidate> {
        let n = idx.len();
        let mut best: Option<Candidate> = None;
        let features = self.feature_subset();
        let mut order = core::mem::take(&mut self.order);
        for f in features {
            order.clear();
            order.extend_from_slice(idx);
            order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
            let total: f64 = order.iter().map(|&i| self.y[i] - mean).sum();
            let total_sq: f64 = order.iter().map(|&i| (self.y[i] - mean) * (self.y[i] - mean)).sum();
            let (mut s, mut sq) = (0.0, 0.0);
            for k in 0..n - 1 {
                let d = self.y[order[k]] - mean;
                s += d;
                sq += d * d;
                let nl = k + 1;
                let nr = n - nl;
                let (a, b) = (self.x[order[k]][f], self.x[order[k + 1]][f]);
                if a == b || nl < min_leaf || nr < min_leaf {
                    continue;
                }
                let sse_l = (sq - s * s / nl as f64).max(0.0);
                let rs = total - s;
                let sse_r = (total_sq - sq - rs * rs / nr as f64).max(0.0);
                let child = sse_l + sse_r;
                if best.as_ref().is_none_or(|c| child < c.child_sse) {
                    let mut t = a + (b - a) / 2.0;
                    if t >= b {
                        t = a;
                    }
                    best = Some(Candidate { feature: f, threshold: t, child_sse: child });
                }
            }
        }
        self.order = order;
        best
    }
}
