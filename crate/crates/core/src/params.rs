//! Names of the structural parameters that can be sampled or shocked.

use core::fmt;
use core::str::FromStr;

/// The thirteen tabulated structural parameters plus the capital-labor ratio.
///
/// Declaration order is the fixed feature order used by sweep datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamName {
    Alpha,
    Beta,
    Gamma,
    Zeta,
    Eta,
    Theta,
    Kappa,
    Lambda,
    Xi,
    Sigma,
    RdShare,
    Phi,
    Chi,
    CapitalLaborRatio,
}

impl ParamName {
    pub const ALL: [ParamName; 14] = [
        ParamName::Alpha,
        ParamName::Beta,
        ParamName::Gamma,
        ParamName::Zeta,
        ParamName::Eta,
        ParamName::Theta,
        ParamName::Kappa,
        ParamName::Lambda,
        ParamName::Xi,
        ParamName::Sigma,
        ParamName::RdShare,
        ParamName::Phi,
        ParamName::Chi,
        ParamName::CapitalLaborRatio,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            ParamName::Alpha => "alpha",
            ParamName::Beta => "beta",
            ParamName::Gamma => "gamma",
            ParamName::Zeta => "zeta",
            ParamName::Eta => "eta",
            ParamName::Theta => "theta",
            ParamName::Kappa => "kappa",
            ParamName::Lambda => "lambda",
            ParamName::Xi => "xi",
            ParamName::Sigma => "sigma",
            ParamName::RdShare => "S_R",
            ParamName::Phi => "phi",
            ParamName::Chi => "chi",
            ParamName::CapitalLaborRatio => "K_over_L",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownParam;

impl FromStr for ParamName {
    type Err = UnknownParam;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ParamName::ALL.into_iter().find(|p| p.as_str() == s).ok_or(UnknownParam)
    }
}
