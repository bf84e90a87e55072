//! Single-instant production: effective factor outputs, CES aggregate, wage,
//! labor share, lock-in friction and the planner's automation frontier.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::profile::{Elasticity, ProductivityProfile, ProfilePair};

/// Capital-output ratio above which capital allocation is flagged as ineffective.
pub const INEFFECTIVE_CAPITAL_RATIO: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorEndowment {
    pub capital: f64,
    pub labor_supply: f64,
    pub rd_share: f64,
}

impl FactorEndowment {
    pub fn new(capital: f64, labor_supply: f64, rd_share: f64) -> Result<Self> {
        if !(capital.is_finite() && capital > 0.0) {
            return Err(Error::param("K", capital, "must be positive"));
        }
        if !(labor_supply.is_finite() && labor_supply > 0.0) {
            return Err(Error::param("L_bar", labor_supply, "must be positive"));
        }
        if !(0.0..1.0).contains(&rd_share) {
            return Err(Error::param("S_R", rd_share, "must lie in [0, 1)"));
        }
        Ok(Self { capital, labor_supply, rd_share })
    }

    /// Labor left for production, `(1 - S_R) L̄`.
    pub fn production_labor(&self) -> f64 {
        (1.0 - self.rd_share) * self.labor_supply
    }

    /// R&D labor, `S_R L̄`.
    pub fn rd_labor(&self) -> f64 {
        self.rd_share * self.labor_supply
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionParams {
    pub gamma: f64,
    pub eta: f64,
    pub base_cost: f64,
}

impl FrictionParams {
    pub fn new(gamma: f64, eta: f64, base_cost: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::param("gamma", gamma, "must be non-negative"));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::param("eta", eta, "must be positive"));
        }
        if !(base_cost.is_finite() && base_cost >= 0.0) {
            return Err(Error::param("z0", base_cost, "must be non-negative"));
        }
        Ok(Self { gamma, eta, base_cost })
    }

    pub const fn frictionless() -> Self {
        Self { gamma: 0.0, eta: 1.0, base_cost: 0.0 }
    }
}

/// Lock-in cost `γ (z0 z* + z*^(η+1) / (η+1))`.
pub fn friction_cost(z_star: f64, fr: &FrictionParams) -> f64 {
    if fr.gamma == 0.0 || z_star <= 0.0 {
        return 0.0;
    }
    let e = fr.eta + 1.0;
    fr.gamma * (fr.base_cost * z_star + math::powf(z_star, e) / e)
}

/// Effective capital and labor outputs `(y_K, y_L)` at frontier `z_star`.
pub fn effective_outputs(
    z_star: f64,
    endow: &FactorEndowment,
    sigma: Elasticity,
    profiles: &ProfilePair,
    task_mass: f64,
) -> Result<(f64, f64)> {
    if !(z_star >= 0.0 && z_star <= task_mass) {
        return Err(Error::FrontierOutOfRange { z_star, task_mass });
    }
    OutputTerms::new(endow, sigma, profiles, task_mass).effective_outputs(z_star)
}

/// Per-instant constants of [`effective_outputs`], hoisted out of the frontier search.
struct OutputTerms<'a> {
    profiles: &'a ProfilePair,
    sigma: Elasticity,
    task_mass: f64,
    inv: f64,
    capital_term: f64,
    labor_term: f64,
    capital_coef: f64,
    labor_coef: f64,
}

impl<'a> OutputTerms<'a> {
    fn new(endow: &FactorEndowment, sigma: Elasticity, profiles: &'a ProfilePair, task_mass: f64) -> Self {
        let rho = sigma.rho();
        let e = sigma.get() - 1.0;
        Self {
            profiles,
            sigma,
            task_mass,
            inv: 1.0 / sigma.get(),
            capital_term: math::powf(endow.capital, rho),
            labor_term: math::powf(endow.production_labor(), rho),
            capital_coef: profiles.capital.coefficient(e),
            labor_coef: profiles.labor.coefficient(e),
        }
    }

    fn integral(&self, p: &ProductivityProfile, coef: f64, lo: f64, hi: f64) -> Result<f64> {
        if hi == lo {
            return Ok(0.0);
        }
        let v = coef * p.unit_integral(lo, hi, self.sigma.get() - 1.0);
        if v.is_finite() {
            Ok(v)
        } else {
            p.integral(lo, hi, self.sigma)
        }
    }

    fn effective_outputs(&self, z_star: f64) -> Result<(f64, f64)> {
        let m = self.task_mass;
        if !(z_star >= 0.0 && z_star <= m) {
            return Err(Error::FrontierOutOfRange { z_star, task_mass: m });
        }
        let ik = self.integral(&self.profiles.capital, self.capital_coef, 0.0, z_star)?;
        let il = self.integral(&self.profiles.labor, self.labor_coef, z_star, m)?;
        let y_k = if ik > 0.0 { math::powf(ik, self.inv) * self.capital_term } else { 0.0 };
        let y_l = if il > 0.0 { math::powf(il, self.inv) * self.labor_term } else { 0.0 };
        Ok((y_k, y_l))
    }
}

/// `𝒦^β (y_K + y_L)^(σ/(σ-1))`.
pub fn aggregate_output(y_k: f64, y_l: f64, sigma: Elasticity, knowledge: f64, beta: f64) -> Result<f64> {
    let y = math::powf(knowledge, beta) * math::powf(y_k + y_l, 1.0 / sigma.rho());
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::SigmaDegenerate(sigma.get()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticEquilibrium {
    pub z_star: f64,
    pub y_k: f64,
    pub y_l: f64,
    pub output: f64,
    pub net_output: f64,
    pub output_per_worker: f64,
    pub wage: f64,
    pub labor_share: f64,
    pub capital_output_ratio: f64,
}

/// Grid scan plus golden-section refinement for the frontier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierSearch {
    pub grid: usize,
    pub tol: f64,
}

impl Default for FrontierSearch {
    fn default() -> Self {
        Self { grid: 256, tol: 1e-8 }
    }
}

/// Everything that pins down production at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticModel {
    pub endowment: FactorEndowment,
    pub sigma: Elasticity,
    pub profiles: ProfilePair,
    pub task_mass: f64,
    pub knowledge: f64,
    pub beta: f64,
    pub friction: FrictionParams,
}

impl StaticModel {
    pub fn effective_outputs(&self, z_star: f64) -> Result<(f64, f64)> {
        effective_outputs(z_star, &self.endowment, self.sigma, &self.profiles, self.task_mass)
    }

    pub fn output(&self, z_star: f64) -> Result<f64> {
        let (y_k, y_l) = self.effective_outputs(z_star)?;
        aggregate_output(y_k, y_l, self.sigma, self.knowledge, self.beta)
    }

    pub fn net_output(&self, z_star: f64) -> Result<f64> {
        Ok(self.output(z_star)? - friction_cost(z_star, &self.friction))
    }

    /// Marginal product of production labor and the labor share `y_L / (y_K + y_L)`.
    pub fn wage_and_labor_share(&self, z_star: f64) -> Result<(f64, f64)> {
        let labor = self.endowment.production_labor();
        if labor <= 0.0 {
            return Err(Error::ZeroLabor);
        }
        let (y_k, y_l) = self.effective_outputs(z_star)?;
        Ok(self.wage_share_from(y_k, y_l, labor))
    }

    fn wage_share_from(&self, y_k: f64, y_l: f64, labor: f64) -> (f64, f64) {
        if y_l == 0.0 {
            return (0.0, 0.0);
        }
        let total = y_k + y_l;
        let w = math::powf(self.knowledge, self.beta) * math::powf(total, 1.0 / (self.sigma.get() - 1.0)) * y_l
            / labor;
        (w, y_l / total)
    }

    pub fn equilibrium(&self, z_star: f64) -> Result<StaticEquilibrium> {
        let labor = self.endowment.production_labor();
        if labor <= 0.0 {
            return Err(Error::ZeroLabor);
        }
        let (y_k, y_l) = self.effective_outputs(z_star)?;
        let output = aggregate_output(y_k, y_l, self.sigma, self.knowledge, self.beta)?;
        let (wage, labor_share) = self.wage_share_from(y_k, y_l, labor);
        if !wage.is_finite() {
            return Err(Error::SigmaDegenerate(self.sigma.get()));
        }
        Ok(StaticEquilibrium {
            z_star,
            y_k,
            y_l,
            output,
            net_output: output - friction_cost(z_star, &self.friction),
            output_per_worker: output / labor,
            wage,
            labor_share,
            capital_output_ratio: self.endowment.capital / output,
        })
    }

    /// Frontier maximizing `Y(z*) - Φ(z*)` on `[0, M]`.
    pub fn optimal_frontier(&self, search: &FrontierSearch) -> Result<f64> {
        let n = search.grid.max(3);
        let m = self.task_mass;
        self.profiles.check_ratio_monotone(m, n)?;
        let node = |i: usize| if i + 1 == n { m } else { m * i as f64 / (n - 1) as f64 };
        let terms = OutputTerms::new(&self.endowment, self.sigma, &self.profiles, m);
        let scale = math::powf(self.knowledge, self.beta);
        let exponent = 1.0 / self.sigma.rho();
        let objective = |z: f64| -> Result<f64> {
            let (y_k, y_l) = terms.effective_outputs(z)?;
            let y = scale * math::powf(y_k + y_l, exponent);
            if !y.is_finite() {
                return Err(Error::SigmaDegenerate(self.sigma.get()));
            }
            Ok(y - friction_cost(z, &self.friction))
        };

        let mut best_i = 0;
        let mut best = objective(0.0)?;
        for i in 1..n {
            let v = objective(node(i))?;
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let lo = node(best_i.saturating_sub(1));
        let hi = node((best_i + 1).min(n - 1));
        let (z, v) = golden_section_max(objective, lo, hi, search.tol)?;
        let grid_z = node(best_i);
        Ok(if v > best || (v == best && z < grid_z) { z } else { grid_z })
    }

    /// Key variables on a uniform `grid_size`-point frontier grid over `[0, M]`.
    pub fn statics_sweep(&self, grid_size: usize, ky_threshold: f64) -> Result<Vec<StaticsRow>> {
        let n = grid_size.max(2);
        (0..n)
            .map(|i| {
                let z = if i + 1 == n { self.task_mass } else { self.task_mass * i as f64 / (n - 1) as f64 };
                let eq = self.equilibrium(z)?;
                Ok(StaticsRow { ineffective_capital: eq.capital_output_ratio > ky_threshold, eq })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticsRow {
    pub eq: StaticEquilibrium,
    pub ineffective_capital: bool,
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}
