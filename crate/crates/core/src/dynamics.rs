//! Forward simulation of the full model.
//!
//! State is `(t, 𝒦, M, Ā)`. Each step the planner picks the frontier `z*` that
//! maximizes net output given the current state, then knowledge, task mass and
//! the baseline GPT level advance with an explicit midpoint predictor-corrector:
//! flows at the current state predict the half-step state, flows re-evaluated
//! there (with the frontier re-optimized) advance the full step.

use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math;
use crate::params::ParamName;
use crate::production::{FactorEndowment, FrictionParams, FrontierSearch, StaticEquilibrium, StaticModel};
use crate::profile::{Elasticity, ProfilePair};
use crate::sweep::{convergence_filter, ConvergenceCriteria};

/// Knowledge production and task creation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthParams {
    pub zeta: f64,
    pub alpha: f64,
    pub phi: f64,
    pub beta: f64,
    pub xi: f64,
    pub kappa: f64,
    pub theta: f64,
    pub lambda: f64,
    pub chi: f64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            zeta: 0.1,
            alpha: 0.4,
            phi: 0.5,
            beta: 0.3,
            xi: 0.4,
            kappa: 0.1,
            theta: 2.0,
            lambda: 2.0,
            chi: 0.003,
        }
    }
}

impl GrowthParams {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("zeta", self.zeta),
            ("beta", self.beta),
            ("xi", self.xi),
            ("kappa", self.kappa),
            ("lambda", self.lambda),
            ("chi", self.chi),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, v, "must be non-negative"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param("alpha", self.alpha, "must lie in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(Error::param("phi", self.phi, "must lie in [0, 1]"));
        }
        if !(self.theta.is_finite() && self.theta > 0.0) {
            return Err(Error::param("theta", self.theta, "must be positive"));
        }
        Ok(())
    }
}

/// Catch-up diffusion of the baseline GPT level toward a global frontier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub rho: f64,
    pub openness: f64,
    pub frontier: f64,
}

impl Default for DiffusionParams {
    fn default() -> Self {
        Self { rho: 0.0, openness: 1.0, frontier: 1.0 }
    }
}

impl DiffusionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho >= 0.0) {
            return Err(Error::param("rho", self.rho, "must be non-negative"));
        }
        if !(self.openness.is_finite() && self.openness >= 0.0) {
            return Err(Error::param("openness", self.openness, "must be non-negative"));
        }
        if !(self.frontier.is_finite() && self.frontier > 0.0) {
            return Err(Error::param("A_tilde", self.frontier, "must be positive"));
        }
        Ok(())
    }
}

/// `A = Ā (1 + λ z*)`.
pub fn effective_gpt(a_bar: f64, lambda: f64, z_star: f64) -> f64 {
    a_bar * (1.0 + lambda * z_star)
}

/// Net knowledge production `ζ A^ξ R^α 𝒦^φ - κ 𝒦^θ`. May be negative.
pub fn knowledge_flow(knowledge: f64, rd_labor: f64, a_eff: f64, gp: &GrowthParams) -> f64 {
    let gross = if gp.zeta == 0.0 {
        0.0
    } else {
        gp.zeta * math::powf(a_eff, gp.xi) * math::powf(rd_labor, gp.alpha) * math::powf(knowledge, gp.phi)
    };
    let validation = if gp.kappa == 0.0 { 0.0 } else { gp.kappa * math::powf(knowledge, gp.theta) };
    gross - validation
}

/// Task creation `χ A^ξ R^α M^φ`.
pub fn task_mass_flow(task_mass: f64, rd_labor: f64, a_eff: f64, gp: &GrowthParams) -> f64 {
    if gp.chi == 0.0 {
        return 0.0;
    }
    gp.chi * math::powf(a_eff, gp.xi) * math::powf(rd_labor, gp.alpha) * math::powf(task_mass, gp.phi)
}

/// `ρ T (Ã - Ā)`.
pub fn gpt_diffusion_flow(a_bar: f64, dp: &DiffusionParams) -> f64 {
    if dp.rho == 0.0 {
        return 0.0;
    }
    dp.rho * dp.openness * (dp.frontier - a_bar)
}

/// Raw, unvalidated model configuration. Every sweepable or shockable
/// parameter is a plain field so it can be overwritten by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub sigma: f64,
    /// `K / ((1 - S_R) L̄)`.
    pub capital_labor_ratio: f64,
    pub labor_supply: f64,
    pub rd_share: f64,
    pub profiles: ProfilePair,
    pub gamma: f64,
    pub eta: f64,
    pub friction_base: f64,
    pub growth: GrowthParams,
    pub diffusion: DiffusionParams,
    pub knowledge0: f64,
    pub task_mass0: f64,
    pub gpt0: f64,
    /// Discount factor for welfare reporting only; never used for control.
    pub discount: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            capital_labor_ratio: 3.0,
            labor_supply: 1.0,
            rd_share: 0.015,
            profiles: ProfilePair::default(),
            gamma: 0.3,
            eta: 2.0,
            friction_base: 0.0,
            growth: GrowthParams::default(),
            diffusion: DiffusionParams::default(),
            knowledge0: 0.1,
            task_mass0: 1.0,
            gpt0: 1.0,
            discount: 0.96,
        }
    }
}

impl ModelParams {
    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::Alpha => self.growth.alpha,
            ParamName::Beta => self.growth.beta,
            ParamName::Gamma => self.gamma,
            ParamName::Zeta => self.growth.zeta,
            ParamName::Eta => self.eta,
            ParamName::Theta => self.growth.theta,
            ParamName::Kappa => self.growth.kappa,
            ParamName::Lambda => self.growth.lambda,
            ParamName::Xi => self.growth.xi,
            ParamName::Sigma => self.sigma,
            ParamName::RdShare => self.rd_share,
            ParamName::Phi => self.growth.phi,
            ParamName::Chi => self.growth.chi,
            ParamName::CapitalLaborRatio => self.capital_labor_ratio,
        }
    }

    pub fn set(&mut self, name: ParamName, value: f64) {
        let slot = match name {
            ParamName::Alpha => &mut self.growth.alpha,
            ParamName::Beta => &mut self.growth.beta,
            ParamName::Gamma => &mut self.gamma,
            ParamName::Zeta => &mut self.growth.zeta,
            ParamName::Eta => &mut self.eta,
            ParamName::Theta => &mut self.growth.theta,
            ParamName::Kappa => &mut self.growth.kappa,
            ParamName::Lambda => &mut self.growth.lambda,
            ParamName::Xi => &mut self.growth.xi,
            ParamName::Sigma => &mut self.sigma,
            ParamName::RdShare => &mut self.rd_share,
            ParamName::Phi => &mut self.growth.phi,
            ParamName::Chi => &mut self.growth.chi,
            ParamName::CapitalLaborRatio => &mut self.capital_labor_ratio,
        };
        *slot = value;
    }

    /// Feature vector in [`ParamName::ALL`] order.
    pub fn features(&self) -> [f64; 14] {
        ParamName::ALL.map(|p| self.get(p))
    }

    pub fn capital(&self) -> f64 {
        self.capital_labor_ratio * (1.0 - self.rd_share) * self.labor_supply
    }

    pub fn resolve(&self) -> Result<Economy> {
        let sigma = Elasticity::new(self.sigma).map_err(|_| Error::param("sigma", self.sigma, "must be positive and != 1"))?;
        if !(self.capital_labor_ratio.is_finite() && self.capital_labor_ratio > 0.0) {
            return Err(Error::param("K_over_L", self.capital_labor_ratio, "must be positive"));
        }
        let endowment = FactorEndowment::new(self.capital(), self.labor_supply, self.rd_share)?;
        let friction = FrictionParams::new(self.gamma, self.eta, self.friction_base)?;
        self.profiles.validate()?;
        self.growth.validate()?;
        self.diffusion.validate()?;
        if !(self.knowledge0.is_finite() && self.knowledge0 > 0.0) {
            return Err(Error::param("knowledge0", self.knowledge0, "must be positive"));
        }
        if !(self.task_mass0.is_finite() && self.task_mass0 > 0.0) {
            return Err(Error::param("task_mass0", self.task_mass0, "must be positive"));
        }
        if !(self.gpt0.is_finite() && self.gpt0 > 0.0) {
            return Err(Error::param("A_bar0", self.gpt0, "must be positive"));
        }
        Ok(Economy {
            endowment,
            sigma,
            profiles: self.profiles,
            friction,
            growth: self.growth,
            diffusion: self.diffusion,
        })
    }

    pub fn initial_state(&self) -> SimState {
        SimState {
            t: 0.0,
            knowledge: self.knowledge0,
            task_mass: self.task_mass0,
            gpt_base: self.gpt0,
            z_star: 0.0,
        }
    }
}

/// Validated parameters for one instant of the dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Economy {
    pub endowment: FactorEndowment,
    pub sigma: Elasticity,
    pub profiles: ProfilePair,
    pub friction: FrictionParams,
    pub growth: GrowthParams,
    pub diffusion: DiffusionParams,
}

impl Economy {
    pub fn static_model(&self, knowledge: f64, task_mass: f64) -> StaticModel {
        StaticModel {
            endowment: self.endowment,
            sigma: self.sigma,
            profiles: self.profiles,
            task_mass,
            knowledge,
            beta: self.growth.beta,
            friction: self.friction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub knowledge: f64,
    pub task_mass: f64,
    pub gpt_base: f64,
    pub z_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flows {
    pub knowledge: f64,
    pub task_mass: f64,
    pub gpt_base: f64,
}

/// Frontier, static equilibrium and flows at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub eq: StaticEquilibrium,
    pub gpt_effective: f64,
    pub flows: Flows,
}

pub fn evaluate(econ: &Economy, state: &SimState, search: &FrontierSearch) -> Result<Snapshot> {
    let model = econ.static_model(state.knowledge, state.task_mass);
    let z_star = model.optimal_frontier(search)?;
    let eq = model.equilibrium(z_star)?;
    let gp = &econ.growth;
    let rd = econ.endowment.rd_labor();
    let a_eff = effective_gpt(state.gpt_base, gp.lambda, z_star);
    Ok(Snapshot {
        eq,
        gpt_effective: a_eff,
        flows: Flows {
            knowledge: knowledge_flow(state.knowledge, rd, a_eff, gp),
            task_mass: task_mass_flow(state.task_mass, rd, a_eff, gp),
            gpt_base: gpt_diffusion_flow(state.gpt_base, &econ.diffusion),
        },
    })
}

pub const KNOWLEDGE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: SimState,
    pub start: Snapshot,
    /// Knowledge hit the floor during the step.
    pub stagnated: bool,
}

/// One predictor-corrector step of length `dt`.
pub fn step(econ: &Economy, state: &SimState, dt: f64, search: &FrontierSearch) -> Result<StepOutcome> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", dt, "must be positive"));
    }
    let start = evaluate(econ, state, search)?;
    advance(econ, state, &start, dt, search)
}

fn advance(econ: &Economy, state: &SimState, start: &Snapshot, dt: f64, search: &FrontierSearch) -> Result<StepOutcome> {
    let mut stagnated = false;
    let mut floor = |k: f64| {
        if k < KNOWLEDGE_FLOOR {
            stagnated = true;
            KNOWLEDGE_FLOOR
        } else {
            k
        }
    };
    let half = 0.5 * dt;
    let mid = SimState {
        t: state.t + half,
        knowledge: floor(state.knowledge + half * start.flows.knowledge),
        task_mass: state.task_mass + half * start.flows.task_mass,
        gpt_base: state.gpt_base + half * start.flows.gpt_base,
        z_star: start.eq.z_star,
    };
    if !(mid.knowledge.is_finite() && mid.task_mass.is_finite() && mid.gpt_base.is_finite()) {
        return Err(Error::NonFiniteState { step: 0, t: mid.t, what: "predictor state" });
    }
    let corr = evaluate(econ, &mid, search)?;
    let next = SimState {
        t: state.t + dt,
        knowledge: floor(state.knowledge + dt * corr.flows.knowledge),
        task_mass: state.task_mass + dt * corr.flows.task_mass,
        gpt_base: state.gpt_base + dt * corr.flows.gpt_base,
        z_star: corr.eq.z_star,
    };
    if !(next.knowledge.is_finite() && next.task_mass.is_finite() && next.gpt_base.is_finite()) {
        return Err(Error::NonFiniteState { step: 0, t: next.t, what: "corrected state" });
    }
    if next.gpt_base <= 0.0 {
        return Err(Error::NonFiniteState { step: 0, t: next.t, what: "GPT level non-positive" });
    }
    Ok(StepOutcome { state: next, start: *start, stagnated })
}

/// Multiplicative perturbation of named parameters on `[start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shock {
    pub params: Vec<ParamName>,
    pub multiplier: f64,
    pub start: f64,
    pub end: f64,
}

impl Shock {
    pub fn is_active(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShockSchedule {
    pub shocks: Vec<Shock>,
}

impl ShockSchedule {
    pub fn new(shocks: Vec<Shock>) -> Result<Self> {
        let s = Self { shocks };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        use alloc::format;
        if self.shocks.len() > 64 {
            return Err(Error::InvalidShock(format!("at most 64 shocks, got {}", self.shocks.len())));
        }
        for (i, s) in self.shocks.iter().enumerate() {
            if !(s.multiplier.is_finite() && s.multiplier > 0.0) {
                return Err(Error::InvalidShock(format!("multiplier {} must be positive", s.multiplier)));
            }
            if !(s.start.is_finite() && s.end.is_finite() && s.start <= s.end) {
                return Err(Error::InvalidShock(format!("window [{}, {}) is not ordered", s.start, s.end)));
            }
            if s.params.is_empty() {
                return Err(Error::InvalidShock(format!("shock {i} names no parameters")));
            }
            for other in &self.shocks[..i] {
                let overlap = s.start < other.end && other.start < s.end;
                if let Some(p) = s.params.iter().find(|p| other.params.contains(p)) {
                    if overlap {
                        return Err(Error::InvalidShock(format!("overlapping windows for `{p}`")));
                    }
                }
            }
        }
        Ok(())
    }

    fn active_mask(&self, t: f64) -> u64 {
        self.shocks
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_active(t))
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// Parameters in force at time `t`.
    pub fn apply(&self, base: &ModelParams, t: f64) -> ModelParams {
        let mut p = *base;
        for s in self.shocks.iter().filter(|s| s.is_active(t)) {
            for &name in &s.params {
                p.set(name, p.get(name) * s.multiplier);
            }
        }
        p
    }
}

/// Preset parameter overlays for the four representative runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// No knowledge accumulation, fixed tasks, no GPT coupling, no frictions.
    Static,
    /// Knowledge accumulation only.
    Knowledge,
    /// Knowledge, task creation and automation-GPT coupling; no frictions.
    Adaptive,
    Full,
}

impl Scenario {
    pub fn apply(self, p: &mut ModelParams) {
        match self {
            Scenario::Static => {
                p.growth.zeta = 0.0;
                p.growth.kappa = 0.0;
                p.growth.lambda = 0.0;
                p.growth.chi = 0.0;
                p.gamma = 0.0;
                p.diffusion.rho = 0.0;
            }
            Scenario::Knowledge => {
                p.growth.lambda = 0.0;
                p.growth.chi = 0.0;
                p.gamma = 0.0;
            }
            Scenario::Adaptive => p.gamma = 0.0,
            Scenario::Full => {}
        }
    }
}

impl FromStr for Scenario {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "0" | "static" => Ok(Scenario::Static),
            "knowledge" => Ok(Scenario::Knowledge),
            "adaptive" => Ok(Scenario::Adaptive),
            "full" => Ok(Scenario::Full),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub shocks: ShockSchedule,
    /// Simulated time span; the run has `round(horizon / dt)` steps.
    pub horizon: f64,
    pub dt: f64,
    pub search: FrontierSearch,
    /// Knowledge level above which the run is flagged as diverging.
    pub divergence_bound: f64,
    pub convergence: ConvergenceCriteria,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            shocks: ShockSchedule::default(),
            horizon: 50.0,
            dt: 0.1,
            search: FrontierSearch::default(),
            divergence_bound: 1e12,
            convergence: ConvergenceCriteria::default(),
        }
    }
}

impl SimConfig {
    pub fn steps(&self) -> usize {
        math::round(self.horizon / self.dt) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub knowledge: f64,
    pub task_mass: f64,
    pub z_star: f64,
    pub output: f64,
    pub net_output: f64,
    pub wage: f64,
    pub labor_share: f64,
    pub g_output: f64,
    pub g_knowledge: f64,
    pub gpt_effective: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub converged: bool,
    pub stagnated: bool,
    pub diverged: bool,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    /// `Σ b^t (Y - Φ) Δt` over the recorded points.
    pub fn discounted_welfare(&self, discount: f64) -> f64 {
        let dt = match self.points.as_slice() {
            [a, b, ..] => b.t - a.t,
            _ => return 0.0,
        };
        self.points.iter().map(|p| math::powf(discount, p.t) * p.net_output * dt).sum()
    }
}

pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    if !(cfg.horizon > 0.0 && cfg.horizon.is_finite()) {
        return Err(Error::param("horizon", cfg.horizon, "must be positive"));
    }
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(Error::param("dt", cfg.dt, "must be positive"));
    }
    cfg.shocks.validate()?;
    let base = cfg.params.resolve()?;
    let n = cfg.steps();
    let mut traj = Trajectory { points: Vec::with_capacity(n + 1), ..Default::default() };
    let mut state = cfg.params.initial_state();
    let mut mask = 0u64;
    let mut econ = base;

    for k in 0..=n {
        state.t = k as f64 * cfg.dt;
        let m = cfg.shocks.active_mask(state.t);
        if m != mask {
            mask = m;
            econ = if m == 0 { base } else { cfg.shocks.apply(&cfg.params, state.t).resolve()? };
        }
        let at_step = |e: Error| match e {
            Error::NonFiniteState { t, what, .. } => Error::NonFiniteState { step: k, t, what },
            Error::SigmaDegenerate(_) => Error::NonFiniteState { step: k, t: state.t, what: "output overflow" },
            other => other,
        };
        let snap = evaluate(&econ, &state, &cfg.search).map_err(at_step)?;
        let g_knowledge = snap.flows.knowledge / state.knowledge;
        traj.points.push(TrajectoryPoint {
            t: state.t,
            knowledge: state.knowledge,
            task_mass: state.task_mass,
            z_star: snap.eq.z_star,
            output: snap.eq.output,
            net_output: snap.eq.net_output,
            wage: snap.eq.wage,
            labor_share: snap.eq.labor_share,
            g_output: econ.growth.beta * g_knowledge,
            g_knowledge,
            gpt_effective: snap.gpt_effective,
        });
        if k == n {
            break;
        }
        let out = advance(&econ, &state, &snap, cfg.dt, &cfg.search).map_err(at_step)?;
        traj.stagnated |= out.stagnated;
        state = out.state;
        if state.knowledge > cfg.divergence_bound {
            traj.diverged = true;
        }
    }
    traj.converged = convergence_filter(&traj, &cfg.convergence).unwrap_or(false);
    Ok(traj)
}
