//! Shock specifications of the form `name[,name...]:*MULT@[t0,t1)`.
//! Several shocks may be joined with `;`.

use taskgrowth_core::dynamics::{Shock, ShockSchedule};
use taskgrowth_core::ParamName;

use crate::error::{Error, Result};

pub fn parse_shock(spec: &str) -> Result<Shock> {
    let bad = |why: &str| Error::Config(format!("shock `{spec}`: {why}; expected name[,name...]:*MULT@[t0,t1)"));
    let (names, rest) = spec.trim().split_once(':').ok_or_else(|| bad("missing `:`"))?;
    let params = names
        .split(',')
        .map(|n| n.trim().parse::<ParamName>().map_err(|_| bad(&format!("unknown parameter `{}`", n.trim()))))
        .collect::<Result<Vec<_>>>()?;
    let rest = rest.trim().strip_prefix('*').ok_or_else(|| bad("multiplier must start with `*`"))?;
    let (mult, window) = rest.split_once('@').ok_or_else(|| bad("missing `@`"))?;
    let multiplier: f64 = mult.trim().parse().map_err(|_| bad(&format!("bad multiplier `{mult}`")))?;
    let window = window
        .trim()
        .strip_prefix('[')
        .and_then(|w| w.strip_suffix(')'))
        .ok_or_else(|| bad("window must be written [t0,t1)"))?;
    let (t0, t1) = window.split_once(',').ok_or_else(|| bad("window needs two bounds"))?;
    let start: f64 = t0.trim().parse().map_err(|_| bad(&format!("bad start `{t0}`")))?;
    let end: f64 = t1.trim().parse().map_err(|_| bad(&format!("bad end `{t1}`")))?;
    Ok(Shock { params, multiplier, start, end })
}

/// Parses and validates every `;`-separated shock across all specs.
pub fn parse_schedule<S: AsRef<str>>(specs: &[S]) -> Result<ShockSchedule> {
    let shocks = specs
        .iter()
        .flat_map(|s| s.as_ref().split(';').filter(|p| !p.trim().is_empty()).map(str::to_owned).collect::<Vec<_>>())
        .map(|s| parse_shock(&s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShockSchedule::new(shocks)?)
}

/// Inverse of [`parse_shock`].
pub fn format_shock(s: &Shock) -> String {
    let names: Vec<&str> = s.params.iter().map(|p| p.as_str()).collect();
    format!("{}:*{}@[{},{})", names.join(","), s.multiplier, s.start, s.end)
}
