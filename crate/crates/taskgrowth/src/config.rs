//! JSON run configuration. Keys mirror the model's parameter names; every
//! key is optional and falls back to the baseline value.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use taskgrowth_core::dynamics::{DiffusionParams, GrowthParams, ModelParams, SimConfig};
use taskgrowth_core::production::{FrontierSearch, INEFFECTIVE_CAPITAL_RATIO};
use taskgrowth_core::profile::{ProductivityProfile, ProfileKind, ProfilePair};
use taskgrowth_core::surrogate::{ForestParams, TreeParams};
use taskgrowth_core::sweep::{default_ranges, ConvergenceCriteria, ParamRange, Sampling};
use taskgrowth_core::ParamName;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub zeta: f64,
    pub eta: f64,
    pub theta: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub xi: f64,
    pub sigma: f64,
    #[serde(rename = "S_R")]
    pub rd_share: f64,
    pub phi: f64,
    pub chi: f64,
    #[serde(rename = "K_over_L")]
    pub capital_labor_ratio: f64,
    #[serde(rename = "L_bar")]
    pub labor_supply: f64,
    /// Per-task base lock-in cost.
    pub z0: f64,
    /// GPT diffusion speed.
    pub rho: f64,
    #[serde(rename = "T")]
    pub openness: f64,
    #[serde(rename = "A_tilde")]
    pub frontier_gpt: f64,
    #[serde(rename = "K0")]
    pub knowledge0: f64,
    #[serde(rename = "M0")]
    pub task_mass0: f64,
    #[serde(rename = "A_bar0")]
    pub gpt0: f64,
    pub discount: f64,
    pub profiles: ProfilesConfig,
    pub simulation: SimulationConfig,
    pub statics: StaticsConfig,
    pub sweep: SweepConfig,
    pub surrogate: SurrogateConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub kind: ProfileKindName,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub shape: f64,
    #[serde(default)]
    pub offset: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKindName {
    Constant,
    Power,
    Exponential,
}

impl From<ProfileConfig> for ProductivityProfile {
    fn from(p: ProfileConfig) -> Self {
        let kind = match p.kind {
            ProfileKindName::Constant => ProfileKind::Constant,
            ProfileKindName::Power => ProfileKind::Power,
            ProfileKindName::Exponential => ProfileKind::Exponential,
        };
        ProductivityProfile { kind, scale: p.scale, shape: p.shape, offset: p.offset }
    }
}

impl From<ProductivityProfile> for ProfileConfig {
    fn from(p: ProductivityProfile) -> Self {
        let kind = match p.kind {
            ProfileKind::Constant => ProfileKindName::Constant,
            ProfileKind::Power => ProfileKindName::Power,
            ProfileKind::Exponential => ProfileKindName::Exponential,
        };
        ProfileConfig { kind, scale: p.scale, shape: p.shape, offset: p.offset }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfilesConfig {
    pub capital: ProfileConfig,
    pub labor: ProfileConfig,
}

impl Default for ProfilesConfig {
    fn default() -> Self {
        let p = ProfilePair::default();
        Self { capital: p.capital.into(), labor: p.labor.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub horizon: f64,
    pub dt: f64,
    pub frontier_grid: usize,
    pub frontier_tol: f64,
    pub divergence_bound: f64,
    pub convergence_tol: f64,
    pub window_fraction: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        let c = SimConfig::default();
        Self {
            horizon: c.horizon,
            dt: c.dt,
            frontier_grid: c.search.grid,
            frontier_tol: c.search.tol,
            divergence_bound: c.divergence_bound,
            convergence_tol: c.convergence.tol,
            window_fraction: c.convergence.window_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaticsConfig {
    pub grid: usize,
    pub ky_threshold: f64,
}

impl Default for StaticsConfig {
    fn default() -> Self {
        Self { grid: 101, ky_threshold: INEFFECTIVE_CAPITAL_RATIO }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingName {
    #[default]
    Uniform,
    Lhs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub sampling: SamplingName,
    /// Overrides of the default exploration ranges, keyed by parameter name.
    pub ranges: BTreeMap<String, [f64; 2]>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let ranges = default_ranges().into_iter().map(|r| (r.name.as_str().to_string(), [r.lo, r.hi])).collect();
        Self { sampling: SamplingName::Uniform, ranges }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurrogateConfig {
    pub n_trees: usize,
    pub train_ratio: f64,
    pub background: usize,
    pub permutation_repeats: usize,
    pub max_depth_grid: Vec<Option<usize>>,
    pub min_samples_split_grid: Vec<usize>,
    pub min_converged: usize,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        Self {
            n_trees: ForestParams::default().n_trees,
            train_ratio: 0.8,
            background: 100,
            permutation_repeats: 5,
            max_depth_grid: vec![Some(3), Some(5), Some(8), Some(12), None],
            min_samples_split_grid: vec![2, 5, 10],
            min_converged: 20,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Self::from_params(&ModelParams::default())
    }
}

impl Config {
    pub fn from_params(p: &ModelParams) -> Self {
        let g = &p.growth;
        Self {
            alpha: g.alpha,
            beta: g.beta,
            gamma: p.gamma,
            zeta: g.zeta,
            eta: p.eta,
            theta: g.theta,
            kappa: g.kappa,
            lambda: g.lambda,
            xi: g.xi,
            sigma: p.sigma,
            rd_share: p.rd_share,
            phi: g.phi,
            chi: g.chi,
            capital_labor_ratio: p.capital_labor_ratio,
            labor_supply: p.labor_supply,
            z0: p.friction_base,
            rho: p.diffusion.rho,
            openness: p.diffusion.openness,
            frontier_gpt: p.diffusion.frontier,
            knowledge0: p.knowledge0,
            task_mass0: p.task_mass0,
            gpt0: p.gpt0,
            discount: p.discount,
            profiles: ProfilesConfig { capital: p.profiles.capital.into(), labor: p.profiles.labor.into() },
            simulation: SimulationConfig::default(),
            statics: StaticsConfig::default(),
            sweep: SweepConfig::default(),
            surrogate: SurrogateConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            sigma: self.sigma,
            capital_labor_ratio: self.capital_labor_ratio,
            labor_supply: self.labor_supply,
            rd_share: self.rd_share,
            profiles: ProfilePair { capital: self.profiles.capital.into(), labor: self.profiles.labor.into() },
            gamma: self.gamma,
            eta: self.eta,
            friction_base: self.z0,
            growth: GrowthParams {
                zeta: self.zeta,
                alpha: self.alpha,
                phi: self.phi,
                beta: self.beta,
                xi: self.xi,
                kappa: self.kappa,
                theta: self.theta,
                lambda: self.lambda,
                chi: self.chi,
            },
            diffusion: DiffusionParams { rho: self.rho, openness: self.openness, frontier: self.frontier_gpt },
            knowledge0: self.knowledge0,
            task_mass0: self.task_mass0,
            gpt0: self.gpt0,
            discount: self.discount,
        }
    }

    /// Simulation settings with no shocks.
    pub fn sim_config(&self) -> Result<SimConfig> {
        let s = &self.simulation;
        let convergence = ConvergenceCriteria { tol: s.convergence_tol, window_fraction: s.window_fraction };
        if !(convergence.window_fraction > 0.0 && convergence.window_fraction <= 0.5) {
            return Err(Error::Config(format!(
                "simulation.window_fraction must lie in (0, 0.5], got {}",
                convergence.window_fraction
            )));
        }
        if !(convergence.tol > 0.0) {
            return Err(Error::Config(format!("simulation.convergence_tol must be positive, got {}", convergence.tol)));
        }
        Ok(SimConfig {
            params: self.model_params(),
            horizon: s.horizon,
            dt: s.dt,
            search: FrontierSearch { grid: s.frontier_grid, tol: s.frontier_tol },
            divergence_bound: s.divergence_bound,
            convergence,
            ..SimConfig::default()
        })
    }

    /// Exploration ranges in feature order; unknown names are rejected.
    pub fn ranges(&self) -> Result<Vec<ParamRange>> {
        let mut ranges = Vec::with_capacity(self.sweep.ranges.len());
        for (name, &[lo, hi]) in &self.sweep.ranges {
            let name: ParamName =
                name.parse().map_err(|_| Error::Config(format!("sweep.ranges: unknown parameter `{name}`")))?;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!("sweep.ranges.{name}: need finite lo <= hi, got [{lo}, {hi}]")));
            }
            ranges.push(ParamRange { name, lo, hi });
        }
        ranges.sort_by_key(|r| r.name.index());
        Ok(ranges)
    }

    pub fn sampling(&self) -> Sampling {
        match self.sweep.sampling {
            SamplingName::Uniform => Sampling::Uniform,
            SamplingName::Lhs => Sampling::LatinHypercube,
        }
    }

    pub fn forest_params(&self) -> ForestParams {
        ForestParams { n_trees: self.surrogate.n_trees, tree: TreeParams::default(), ..ForestParams::default() }
    }
}
