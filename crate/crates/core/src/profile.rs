//! Task productivity profiles `a(z)` and the CES kernels `∫ a(z)^(σ-1) dz`.

use crate::error::{Error, Result};
use crate::math;

/// Elasticity of substitution across tasks. Always finite, positive, and not 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Elasticity(f64);

impl Elasticity {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 || sigma == 1.0 {
            return Err(Error::UnsupportedSigma(sigma));
        }
        Ok(Self(sigma))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `(σ - 1) / σ`, the exponent applied to factor quantities.
    #[inline]
    pub fn rho(self) -> f64 {
        (self.0 - 1.0) / self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Constant,
    /// `c · (z + offset)^shape`
    Power,
    /// `c · exp(shape · z)`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductivityProfile {
    pub kind: ProfileKind,
    pub scale: f64,
    pub shape: f64,
    pub offset: f64,
}

impl ProductivityProfile {
    pub const fn constant(scale: f64) -> Self {
        Self { kind: ProfileKind::Constant, scale, shape: 0.0, offset: 0.0 }
    }

    pub const fn power(scale: f64, exponent: f64, offset: f64) -> Self {
        Self { kind: ProfileKind::Power, scale, shape: exponent, offset }
    }

    pub const fn exponential(scale: f64, rate: f64) -> Self {
        Self { kind: ProfileKind::Exponential, scale, shape: rate, offset: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::param("profile.scale", self.scale, "must be positive"));
        }
        if !self.shape.is_finite() {
            return Err(Error::param("profile.shape", self.shape, "must be finite"));
        }
        if self.kind == ProfileKind::Power {
            if !(self.offset.is_finite() && self.offset >= 0.0) {
                return Err(Error::param("profile.offset", self.offset, "must be non-negative"));
            }
            if self.shape < 0.0 && self.offset == 0.0 {
                return Err(Error::param(
                    "profile.offset",
                    self.offset,
                    "negative exponent needs a positive offset",
                ));
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: f64) -> f64 {
        match self.kind {
            ProfileKind::Constant => self.scale,
            ProfileKind::Power => self.scale * math::powf(z + self.offset, self.shape),
            ProfileKind::Exponential => self.scale * math::exp(self.shape * z),
        }
    }

    /// `∫_lo^hi a(z)^(σ-1) dz` in closed form, falling back to adaptive
    /// quadrature if the closed form is not finite.
    pub fn integral(&self, lo: f64, hi: f64, sigma: Elasticity) -> Result<f64> {
        if !(lo >= 0.0 && lo <= hi) {
            return Err(Error::InvalidRange { lo, hi });
        }
        let closed = self.integral_closed_form(lo, hi, sigma.get() - 1.0);
        if closed.is_finite() {
            Ok(closed)
        } else {
            Ok(self.integral_quadrature(lo, hi, sigma))
        }
    }

    pub fn integral_quadrature(&self, lo: f64, hi: f64, sigma: Elasticity) -> f64 {
        let e = sigma.get() - 1.0;
        let scale = self.integral_closed_form(0.0, 1.0, e).abs().max(1.0);
        math::integrate_adaptive(|z| math::powf(self.eval(z), e), lo, hi, 1e-14 * scale)
    }

    fn integral_closed_form(&self, lo: f64, hi: f64, e: f64) -> f64 {
        if hi == lo {
            return 0.0;
        }
        self.coefficient(e) * self.unit_integral(lo, hi, e)
    }

    /// `scale^e`, the factor pulled out of the closed-form integral.
    pub(crate) fn coefficient(&self, e: f64) -> f64 {
        math::powf(self.scale, e)
    }

    /// Closed-form integral of `(a(z) / scale)^e`.
    pub(crate) fn unit_integral(&self, lo: f64, hi: f64, e: f64) -> f64 {
        match self.kind {
            ProfileKind::Constant => hi - lo,
            ProfileKind::Power => {
                let k = self.shape * e + 1.0;
                let (a, b) = (lo + self.offset, hi + self.offset);
                if k == 0.0 {
                    math::ln(b) - math::ln(a)
                } else {
                    (math::powf(b, k) - math::powf(a, k)) / k
                }
            }
            ProfileKind::Exponential => {
                let k = self.shape * e;
                if k == 0.0 {
                    hi - lo
                } else {
                    math::exp(k * lo) * math::expm1(k * (hi - lo)) / k
                }
            }
        }
    }
}

/// Capital and labor productivity profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePair {
    pub capital: ProductivityProfile,
    pub labor: ProductivityProfile,
}

impl Default for ProfilePair {
    /// Capital constant at 1, labor `e^z`: labor's comparative advantage grows with `z`.
    fn default() -> Self {
        Self {
            capital: ProductivityProfile::constant(1.0),
            labor: ProductivityProfile::exponential(1.0, 1.0),
        }
    }
}

impl ProfilePair {
    pub const fn constant() -> Self {
        Self {
            capital: ProductivityProfile::constant(1.0),
            labor: ProductivityProfile::constant(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.capital.validate()?;
        self.labor.validate()
    }

    /// Growth rates when both profiles are constant or exponential, in which
    /// case the ratio is a single exponential.
    fn exponential_rates(&self) -> Option<(f64, f64)> {
        let rate = |p: &ProductivityProfile| match p.kind {
            ProfileKind::Constant => Some(0.0),
            ProfileKind::Exponential => Some(p.shape),
            ProfileKind::Power => None,
        };
        Some((rate(&self.capital)?, rate(&self.labor)?))
    }

    pub fn ratio(&self, z: f64) -> f64 {
        self.labor.eval(z) / self.capital.eval(z)
    }

    /// Checks `a_L/a_K` is non-decreasing on `points` uniform nodes of `[0, task_mass]`.
    pub fn check_ratio_monotone(&self, task_mass: f64, points: usize) -> Result<()> {
        if self.exponential_rates().is_some_and(|(k, l)| l >= k) {
            return Ok(());
        }
        let n = points.max(2);
        let mut prev = self.ratio(0.0);
        for i in 1..n {
            let z = task_mass * i as f64 / (n - 1) as f64;
            let r = self.ratio(z);
            if r < prev * (1.0 - 1e-12) {
                return Err(Error::ProfileViolation { at: z });
            }
            prev = r;
        }
        Ok(())
    }
}

pub fn profile_integral(profile: &ProductivityProfile, lo: f64, hi: f64, sigma: f64) -> Result<f64> {
    profile.integral(lo, hi, Elasticity::new(sigma)?)
}
