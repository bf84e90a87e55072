//! Interventional Shapley values.
//!
//! The value of a coalition `S` is `f_S(x) = mean_b f(x_S, b_{N∖S})` over
//! background rows `b`. [`shapley_values`] treats the model as a black box and
//! either enumerates all `2^n` coalitions with weights `|S|!(n-|S|-1)!/n!` or
//! averages marginal contributions over random feature orderings.
//! [`tree_shapley`] computes the same exact values for a forest by walking
//! each tree once per background row.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::forest::Forest;
use super::tree::{Tree, TreeNode};
use crate::error::{Error, Result};
use crate::rng;

pub const MAX_EXACT_FEATURES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapleyMode {
    Exact,
    Sampled { permutations: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapReport {
    /// Mean prediction over the background rows.
    pub base: f64,
    pub values: Vec<f64>,
    pub prediction: f64,
}

impl ShapReport {
    /// `base + Σ φ_i - prediction`.
    pub fn efficiency_gap(&self) -> f64 {
        self.base + self.values.iter().sum::<f64>() - self.prediction
    }
}

fn check_inputs(x: &[f64], background: &[Vec<f64>]) -> Result<()> {
    if background.is_empty() {
        return Err(Error::EmptyBackground);
    }
    if let Some(b) = background.iter().find(|b| b.len() != x.len()) {
        return Err(Error::ArityMismatch { expected: x.len(), got: b.len() });
    }
    Ok(())
}

/// Coalition value with `mask` selecting the features taken from `x`.
fn coalition_value<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], background: &[Vec<f64>], mask: u64, buf: &mut [f64]) -> f64 {
    let mut acc = 0.0;
    for b in background {
        for (j, slot) in buf.iter_mut().enumerate() {
            *slot = if mask >> j & 1 == 1 { x[j] } else { b[j] };
        }
        acc += f(buf);
    }
    acc / background.len() as f64
}

/// `1 / (n C(n-1, s))`, the weight of a size-`s` coalition.
fn coalition_weights(n: usize) -> Vec<f64> {
    let mut binom = 1.0;
    (0..n)
        .map(|s| {
            if s > 0 {
                binom = binom * (n - s) as f64 / s as f64;
            }
            1.0 / (n as f64 * binom)
        })
        .collect()
}

pub fn shapley_values<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], background: &[Vec<f64>], mode: ShapleyMode) -> Result<ShapReport> {
    check_inputs(x, background)?;
    let n = x.len();
    let mut buf = vec![0.0; n];
    match mode {
        ShapleyMode::Exact => {
            if n > MAX_EXACT_FEATURES {
                return Err(Error::TooManyFeatures { got: n, max: MAX_EXACT_FEATURES });
            }
            let full = (1u64 << n) - 1;
            let v: Vec<f64> = (0..=full).map(|m| coalition_value(&f, x, background, m, &mut buf)).collect();
            let w = coalition_weights(n);
            let mut phi = vec![0.0; n];
            for (i, p) in phi.iter_mut().enumerate() {
                let bit = 1u64 << i;
                for s in (0..=full).filter(|s| s & bit == 0) {
                    *p += w[s.count_ones() as usize] * (v[(s | bit) as usize] - v[s as usize]);
                }
            }
            Ok(ShapReport { base: v[0], values: phi, prediction: v[full as usize] })
        }
        ShapleyMode::Sampled { permutations, seed } => {
            if n > 64 {
                return Err(Error::TooManyFeatures { got: n, max: 64 });
            }
            let base = coalition_value(&f, x, background, 0, &mut buf);
            let mut g = rng::seeded(seed);
            let mut order: Vec<usize> = (0..n).collect();
            let mut phi = vec![0.0; n];
            let k = permutations.max(1);
            for _ in 0..k {
                order.shuffle(&mut g);
                let (mut mask, mut prev) = (0u64, base);
                for &i in &order {
                    mask |= 1 << i;
                    let cur = coalition_value(&f, x, background, mask, &mut buf);
                    phi[i] += cur - prev;
                    prev = cur;
                }
            }
            phi.iter_mut().for_each(|p| *p /= k as f64);
            Ok(ShapReport { base, values: phi, prediction: f(x) })
        }
    }
}

/// Exact interventional Shapley values of a forest.
///
/// For a fixed background row, the hybrid input reaches a leaf only if every
/// split on the path where `x` and `b` disagree takes `x`'s side (the feature
/// must be in `S`) or `b`'s side (it must be out of `S`). With `p` features
/// forced in and `q` forced out, the leaf indicator game has Shapley value
/// `(p-1)! q! / (p+q)!` for each forced-in feature and `-p! (q-1)! / (p+q)!`
/// for each forced-out one.
pub fn tree_shapley(forest: &Forest, x: &[f64], background: &[Vec<f64>]) -> Result<ShapReport> {
    let n = forest.n_features();
    if x.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: x.len() });
    }
    check_inputs(x, background)?;
    if n > 64 {
        return Err(Error::TooManyFeatures { got: n, max: 64 });
    }
    let mut phi = vec![0.0; n];
    for tree in &forest.trees {
        for b in background {
            walk(tree, 0, x, b, 0, 0, &mut phi);
        }
    }
    let scale = 1.0 / (forest.trees.len() * background.len()) as f64;
    phi.iter_mut().for_each(|p| *p *= scale);
    let base = background.iter().map(|b| forest.predict_unchecked(b)).sum::<f64>() / background.len() as f64;
    Ok(ShapReport { base, values: phi, prediction: forest.predict_unchecked(x) })
}

fn walk(tree: &Tree, node: usize, x: &[f64], b: &[f64], inside: u64, outside: u64, phi: &mut [f64]) {
    match tree.nodes()[node] {
        TreeNode::Leaf { value, .. } => {
            let p = inside.count_ones() as usize;
            let q = outside.count_ones() as usize;
            if p + q == 0 || value == 0.0 {
                return;
            }
            let c = binom(p + q, p);
            let w_in = if p > 0 { value / (p as f64 * c) } else { 0.0 };
            let w_out = if q > 0 { value / (q as f64 * c) } else { 0.0 };
            for (j, slot) in phi.iter_mut().enumerate() {
                let bit = 1u64 << j;
                if inside & bit != 0 {
                    *slot += w_in;
                } else if outside & bit != 0 {
                    *slot -= w_out;
                }
            }
        }
        TreeNode::Split { feature, threshold, left, right, .. } => {
            let bit = 1u64 << feature;
            let x_left = x[feature] <= threshold;
            let b_left = b[feature] <= threshold;
            if x_left == b_left {
                let next = if x_left { left } else { right };
                walk(tree, next, x, b, inside, outside, phi);
                return;
            }
            let (x_child, b_child) = if x_left { (left, right) } else { (right, left) };
            if outside & bit == 0 {
                walk(tree, x_child, x, b, inside | bit, outside, phi);
            }
            if inside & bit == 0 {
                walk(tree, b_child, x, b, inside, outside | bit, phi);
            }
        }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
