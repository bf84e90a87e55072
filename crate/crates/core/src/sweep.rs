//! Parameter-space exploration: seeded sampling, batched simulation and
//! convergence filtering.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dynamics::{simulate, ModelParams, SimConfig, Trajectory};
use crate::error::{Error, Result};
use crate::math;
use crate::params::ParamName;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub name: ParamName,
    pub lo: f64,
    pub hi: f64,
}

impl ParamRange {
    pub const fn new(name: ParamName, lo: f64, hi: f64) -> Self {
        Self { name, lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Exploration ranges around the baseline, plus the capital-labor ratio on `[1, 5]`.
pub fn default_ranges() -> Vec<ParamRange> {
    use ParamName::*;
    [
        (Alpha, 0.4, 0.7),
        (Beta, 0.2, 0.6),
        (Gamma, 0.0, 1.0),
        (Zeta, 0.0, 0.4),
        (Eta, 1.0, 3.0),
        (Theta, 1.0, 3.0),
        (Kappa, 0.0, 0.3),
        (Lambda, 0.0, 3.0),
        (Xi, 0.2, 0.6),
        (Sigma, 0.8, 3.0),
        (RdShare, 0.01, 0.03),
        (Phi, 0.25, 1.0),
        (Chi, 0.0, 0.01),
        (CapitalLaborRatio, 1.0, 5.0),
    ]
    .into_iter()
    .map(|(p, lo, hi)| ParamRange::new(p, lo, hi))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Independent uniform draw per coordinate.
    #[default]
    Uniform,
    /// One draw per stratum per coordinate, strata shuffled independently.
    LatinHypercube,
}

/// `n` parameter vectors aligned with `ranges`. Same seed, same output.
pub fn sample_params(ranges: &[ParamRange], n: usize, seed: u64, scheme: Sampling) -> Result<Vec<Vec<f64>>> {
    if ranges.is_empty() {
        return Err(Error::EmptyRanges);
    }
    for r in ranges {
        if !(r.lo.is_finite() && r.hi.is_finite() && r.lo <= r.hi) {
            return Err(Error::param(r.name.as_str(), r.lo, "range bounds must satisfy lo <= hi"));
        }
    }
    let lerp = |r: &ParamRange, u: f64| (r.lo + (r.hi - r.lo) * u).min(r.hi);
    match scheme {
        Sampling::Uniform => Ok((0..n)
            .map(|id| {
                let mut g = rng::seeded(rng::derive_seed(seed, id as u64));
                ranges.iter().map(|r| lerp(r, g.gen::<f64>())).collect()
            })
            .collect()),
        Sampling::LatinHypercube => {
            let mut g = rng::seeded(seed);
            let mut out = alloc::vec![Vec::with_capacity(ranges.len()); n];
            for r in ranges {
                let mut strata: Vec<usize> = (0..n).collect();
                strata.shuffle(&mut g);
                for (row, s) in out.iter_mut().zip(strata) {
                    let u = (s as f64 + g.gen::<f64>()) / n as f64;
                    row.push(lerp(r, u));
                }
            }
            Ok(out)
        }
    }
}

pub fn apply_sample(base: &ModelParams, ranges: &[ParamRange], values: &[f64]) -> ModelParams {
    let mut p = *base;
    for (r, &v) in ranges.iter().zip(values) {
        p.set(r.name, v);
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCriteria {
    pub tol: f64,
    pub window_fraction: f64,
}

impl Default for ConvergenceCriteria {
    fn default() -> Self {
        Self { tol: 1e-4, window_fraction: 0.1 }
    }
}

/// True iff over the trailing window every per-step change of both the
/// labor share and the wage is strictly below `tol (1 + |final value|)`.
pub fn convergence_filter(traj: &Trajectory, crit: &ConvergenceCriteria) -> Result<bool> {
    if !(crit.window_fraction > 0.0 && crit.window_fraction <= 0.5) {
        return Err(Error::param("window_fraction", crit.window_fraction, "must lie in (0, 0.5]"));
    }
    let n = traj.points.len();
    if n < 10 {
        return Err(Error::TrajectoryTooShort(n));
    }
    let window = (math::ceil(crit.window_fraction * (n - 1) as f64) as usize).clamp(1, n - 1);
    let tail = &traj.points[n - 1 - window..];
    let settled = |f: fn(&crate::dynamics::TrajectoryPoint) -> f64| {
        let last = f(&tail[window]);
        let bound = crit.tol * (1.0 + last.abs());
        last.is_finite() && tail.windows(2).all(|p| (f(&p[1]) - f(&p[0])).abs() < bound)
    };
    Ok(settled(|p| p.labor_share) && settled(|p| p.wage))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Converged,
    /// Finished but still drifting over the trailing window.
    Drift,
    /// Aborted: invalid parameters or a non-finite state.
    NonFinite,
}

impl RowStatus {
    pub const fn as_str(self) -> &'static str {
        match self {
            RowStatus::Converged => "converged",
            RowStatus::Drift => "drift",
            RowStatus::NonFinite => "non_finite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub sample_id: usize,
    pub seed: u64,
    /// Full parameter vector in [`ParamName::ALL`] order.
    pub features: [f64; 14],
    pub wage: f64,
    pub labor_share: f64,
    pub z_star: f64,
    pub output: f64,
    pub g_output: f64,
    pub converged: bool,
}

impl SweepRow {
    pub fn status(&self) -> RowStatus {
        if self.converged {
            RowStatus::Converged
        } else if self.wage.is_finite() && self.labor_share.is_finite() {
            RowStatus::Drift
        } else {
            RowStatus::NonFinite
        }
    }

    pub fn feature(&self, p: ParamName) -> f64 {
        self.features[p.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Wage,
    LaborShare,
}

impl Target {
    pub fn of(self, row: &SweepRow) -> f64 {
        match self {
            Target::Wage => row.wage,
            Target::LaborShare => row.labor_share,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepDataset {
    pub rows: Vec<SweepRow>,
}

impl SweepDataset {
    pub fn converged(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.converged)
    }

    pub fn converged_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.converged().count() as f64 / self.rows.len() as f64
    }

    /// Feature matrix and targets over the converged rows.
    pub fn training_data(&self, target: Target) -> (Vec<Vec<f64>>, Vec<f64>) {
        self.converged().map(|r| (r.features.to_vec(), target.of(r))).unzip()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub sample_id: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutcome {
    pub dataset: SweepDataset,
    pub failures: Vec<SweepFailure>,
}

/// Simulates one sample; failures become non-converged rows with NaN outputs.
pub fn run_sample(
    sample_id: usize,
    seed: u64,
    values: &[f64],
    ranges: &[ParamRange],
    base: &SimConfig,
) -> (SweepRow, Option<SweepFailure>) {
    let params = apply_sample(&base.params, ranges, values);
    let mut row = SweepRow {
        sample_id,
        seed,
        features: params.features(),
        wage: f64::NAN,
        labor_share: f64::NAN,
        z_star: f64::NAN,
        output: f64::NAN,
        g_output: f64::NAN,
        converged: false,
    };
    let cfg = SimConfig { params, ..base.clone() };
    match simulate(&cfg) {
        Ok(traj) => {
            if let Some(end) = traj.last() {
                row.wage = end.wage;
                row.labor_share = end.labor_share;
                row.z_star = end.z_star;
                row.output = end.output;
                row.g_output = end.g_output;
            }
            row.converged = traj.converged;
            (row, None)
        }
        Err(e) => (row, Some(SweepFailure { sample_id, message: e.to_string() })),
    }
}

/// Sequential batch run; rows come back ordered by `sample_id`.
pub fn run_sweep(samples: &[Vec<f64>], ranges: &[ParamRange], base: &SimConfig, seed: u64) -> SweepOutcome {
    let mut out = SweepOutcome::default();
    for (id, values) in samples.iter().enumerate() {
        let (row, failure) = run_sample(id, seed, values, ranges, base);
        out.dataset.rows.push(row);
        out.failures.extend(failure);
    }
    out
}

/// Average ranks (1-based), ties sharing their mean rank.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = alloc::vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len());
    if n < 2 {
        return f64::NAN;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (x[i] - mx, y[i] - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / math::sqrt(sxx * syy)
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}
