//! Line-oriented `key = value` run configuration.
//!
//! ```text
//! # uniform volume fraction shock tube
//! preset = t1_uniform_vf      # optional, must come first
//! n_cells = 500
//! left1 = 0.5 50 0 1e9        # alpha rho u p of phase 1 left of the diaphragm
//! regime = constant 1
//! ```
//!
//! Keys: `preset`, `x_min`, `x_max`, `n_cells`, `t_end`, `cfl`, `gamma1`, `pi1`,
//! `gamma2`, `pi2`, `left1`, `left2`, `right1`, `right2`, `interface`,
//! `regime`, `relaxation`, `snapshots`, `output`, `seed`. Without a preset
//! every key up to `right2` is required. Units are SI; times in seconds.

use std::collections::HashSet;
use std::path::PathBuf;

use dem_core::regime::RegimePolicy;
use dem_core::scheme::PhaseInit;
use dem_core::{EosParams, RelaxationMode, RunConfig};

use crate::presets;
use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub run: RunConfig,
    /// Directory receiving snapshot files.
    pub output: Option<PathBuf>,
}

const REQUIRED: [&str; 13] = [
    "x_min", "x_max", "n_cells", "t_end", "gamma1", "pi1", "gamma2", "pi2", "left1", "left2", "right1", "right2",
    "interface",
];

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Config { line, message: message.into() }
}

fn number(line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(line, format!("`{key}` expects a number, got `{value}`")))
}

fn numbers(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| number(line, key, s))
        .collect()
}

fn phase_init(line: usize, key: &str, value: &str) -> Result<PhaseInit> {
    match numbers(line, key, value)?[..] {
        [alpha, rho, u, p] => Ok(PhaseInit::new(alpha, rho, u, p)),
        _ => Err(err(line, format!("`{key}` expects four numbers: alpha rho u p"))),
    }
}

/// Parses a regime description: `constant R`, `piecewise V0 B1 V1 ...`,
/// `stochastic R0 EPS` or `random`.
pub fn parse_regime(value: &str) -> std::result::Result<RegimePolicy, String> {
    let mut words = value.split_whitespace();
    let kind = words.next().unwrap_or("");
    let args: Vec<f64> = words
        .map(|w| w.parse::<f64>().map_err(|_| format!("`{w}` is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    let policy = match (kind, &args[..]) {
        ("constant", [r]) => RegimePolicy::Constant(*r),
        ("stochastic", [r0, eps]) => RegimePolicy::Stochastic { r0: *r0, epsilon: *eps },
        ("random", []) => RegimePolicy::Random,
        ("reference_piecewise", []) => RegimePolicy::reference_piecewise(),
        ("piecewise", a) if a.len() % 2 == 1 => RegimePolicy::Piecewise {
            values: a.iter().step_by(2).copied().collect(),
            breakpoints: a.iter().skip(1).step_by(2).copied().collect(),
        },
        _ => {
            return Err(format!(
                "invalid regime `{value}` (expected `constant R`, `piecewise V0 B1 V1 ...`, `stochastic R0 EPS` or `random`)"
            ))
        }
    };
    policy.validate().map_err(|e| e.to_string())?;
    Ok(policy)
}

/// Applies one `key = value` assignment; `line` is used for diagnostics.
pub fn apply(cfg: &mut CliConfig, key: &str, value: &str, line: usize) -> Result<()> {
    let run = &mut cfg.run;
    match key {
        "x_min" => run.x_min = number(line, key, value)?,
        "x_max" => run.x_max = number(line, key, value)?,
        "n_cells" => {
            run.n_cells = value.parse().map_err(|_| err(line, format!("`n_cells` expects an integer, got `{value}`")))?
        }
        "t_end" => run.t_end = number(line, key, value)?,
        "cfl" => run.cfl = number(line, key, value)?,
        "gamma1" => run.eos[0].gamma = number(line, key, value)?,
        "pi1" => run.eos[0].pi_inf = number(line, key, value)?,
        "gamma2" => run.eos[1].gamma = number(line, key, value)?,
        "pi2" => run.eos[1].pi_inf = number(line, key, value)?,
        "left1" => run.left[0] = phase_init(line, key, value)?,
        "left2" => run.left[1] = phase_init(line, key, value)?,
        "right1" => run.right[0] = phase_init(line, key, value)?,
        "right2" => run.right[1] = phase_init(line, key, value)?,
        "interface" => run.interface = number(line, key, value)?,
        "regime" => run.regime = parse_regime(value).map_err(|m| err(line, m))?,
        "relaxation" => run.relaxation = value.parse::<RelaxationMode>().map_err(|m| err(line, m))?,
        "snapshots" => run.snapshots = numbers(line, key, value)?,
        "output" => cfg.output = Some(PathBuf::from(value)),
        "seed" => run.seed = value.parse().map_err(|_| err(line, format!("`seed` expects an unsigned integer, got `{value}`")))?,
        other => return Err(err(line, format!("unknown key `{other}`"))),
    }
    Ok(())
}

fn blank() -> CliConfig {
    let nan = PhaseInit::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    CliConfig {
        run: RunConfig {
            x_min: f64::NAN,
            x_max: f64::NAN,
            n_cells: 0,
            t_end: f64::NAN,
            cfl: 0.9,
            eos: [EosParams { gamma: f64::NAN, pi_inf: f64::NAN }; 2],
            left: [nan; 2],
            right: [nan; 2],
            interface: f64::NAN,
            regime: RegimePolicy::Constant(0.0),
            relaxation: RelaxationMode::None,
            snapshots: Vec::new(),
            seed: 0,
        },
        output: None,
    }
}

/// Splits a line into `(key, value)`, dropping comments. `None` for blank lines.
fn split_line(raw: &str, line: usize) -> Result<Option<(&str, &str)>> {
    let text = raw.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let (k, v) = text.split_once('=').ok_or_else(|| err(line, format!("expected `key = value`, got `{text}`")))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() {
        return Err(err(line, format!("expected `key = value`, got `{text}`")));
    }
    Ok(Some((k, v)))
}

pub fn parse_config(text: &str) -> Result<CliConfig> {
    let mut cfg = blank();
    let mut seen = HashSet::new();
    let mut from_preset = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let Some((key, value)) = split_line(raw, line)? else { continue };
        if !seen.insert(key.to_string()) {
            return Err(err(line, format!("duplicate key `{key}`")));
        }
        if key == "preset" {
            if seen.len() > 1 {
                return Err(err(line, "`preset` must precede every other key"));
            }
            cfg = presets::preset(value).ok_or_else(|| err(line, format!("unknown preset `{value}`")))?;
            from_preset = true;
            continue;
        }
        apply(&mut cfg, key, value, line)?;
    }
    if !from_preset {
        if let Some(missing) = REQUIRED.iter().find(|k| !seen.contains(**k)) {
            return Err(err(last_line + 1, format!("missing required key `{missing}`")));
        }
    }
    EosParams::new(cfg.run.eos[0].gamma, cfg.run.eos[0].pi_inf).map_err(|e| err(last_line + 1, e.to_string()))?;
    EosParams::new(cfg.run.eos[1].gamma, cfg.run.eos[1].pi_inf).map_err(|e| err(last_line + 1, e.to_string()))?;
    cfg.run.validate().map_err(|e| err(last_line + 1, e.to_string()))?;
    Ok(cfg)
}

/// Applies `key=value` overrides given on the command line.
pub fn apply_overrides(cfg: &mut CliConfig, overrides: &[String]) -> Result<()> {
    for (i, o) in overrides.iter().enumerate() {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("override `{o}` is not of the form key=value")))?;
        apply(cfg, k.trim(), v.trim(), i + 1).map_err(|e| match e {
            CliError::Config { message, .. } => CliError::Usage(format!("override `{o}`: {message}")),
            other => other,
        })?;
    }
    cfg.run.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(())
}
