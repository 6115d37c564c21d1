//! Discrete error norms of a snapshot against exact Riemann solutions.

use std::path::Path;
use std::str::FromStr;

use dem_core::riemann::{exact_rp, ExactRiemann};
use dem_core::RunConfig;

use crate::config::{parse_config, CliConfig};
use crate::presets::preset;
use crate::snapshot::SnapshotTable;
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Each phase against its own single-material solution.
    PerPhase,
    /// Mixture fields against the two-material solution between the dominant phases.
    Mixture,
}

impl FromStr for OracleKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-phase" => Ok(OracleKind::PerPhase),
            "mixture" => Ok(OracleKind::Mixture),
            other => Err(CliError::Usage(format!("unknown oracle `{other}` (expected per-phase or mixture)"))),
        }
    }
}

impl OracleKind {
    pub fn fields(self) -> &'static [&'static str] {
        match self {
            OracleKind::PerPhase => &["rho1", "u1", "p1", "rho2", "u2", "p2"],
            OracleKind::Mixture => &["rho_mix", "u_mix", "p_mix"],
        }
    }
}

/// Parses `<kind>:<preset name or config path>`.
pub fn parse_oracle_spec(spec: &str) -> Result<(OracleKind, CliConfig)> {
    let (kind, source) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("oracle spec `{spec}` must look like per-phase:<preset|config>")))?;
    let cfg = match preset(source) {
        Some(cfg) => cfg,
        None => parse_config(&std::fs::read_to_string(Path::new(source))?)?,
    };
    Ok((kind.parse()?, cfg))
}

/// Sub-samples per cell used to average the exact solution.
pub const CELL_SUBSAMPLES: usize = 32;

/// Exact field values averaged over the cells centred at `xs` (width `dx`) at time `t`,
/// in the order of [`OracleKind::fields`].
pub fn oracle_fields(kind: OracleKind, config: &RunConfig, t: f64, xs: &[f64], dx: f64) -> Result<Vec<Vec<f64>>> {
    let xi = |x: f64| {
        let d = x - config.interface;
        if t > 0.0 {
            d / t
        } else if d < 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    };
    let n = CELL_SUBSAMPLES as f64;
    let average = |ex: &ExactRiemann| -> Vec<[f64; 3]> {
        xs.iter()
            .map(|&xc| {
                let mut acc = [0.0; 3];
                for j in 0..CELL_SUBSAMPLES {
                    let x = xc - 0.5 * dx + (j as f64 + 0.5) * dx / n;
                    let v = ex.sample(xi(x));
                    acc[0] += v.rho;
                    acc[1] += v.u;
                    acc[2] += v.p;
                }
                acc.map(|a| a / n)
            })
            .collect()
    };
    let columns = |avg: &[[f64; 3]]| (0..3).map(|c| avg.iter().map(|v| v[c]).collect::<Vec<_>>()).collect::<Vec<_>>();
    match kind {
        OracleKind::PerPhase => {
            let mut out = Vec::with_capacity(6);
            for k in 0..2 {
                let ex = exact_rp(&config.left[k].state, &config.right[k].state, &config.eos[k], &config.eos[k])?;
                out.extend(columns(&average(&ex)));
            }
            Ok(out)
        }
        OracleKind::Mixture => {
            let dominant = |side: &[dem_core::scheme::PhaseInit; 2]| if side[0].alpha >= side[1].alpha { 0 } else { 1 };
            let (kl, kr) = (dominant(&config.left), dominant(&config.right));
            let ex = exact_rp(&config.left[kl].state, &config.right[kr].state, &config.eos[kl], &config.eos[kr])?;
            Ok(columns(&average(&ex)))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: &'static str,
    /// `sum |q - q_exact| dx`
    pub l1: f64,
    /// `l1 / sum |q_exact| dx`
    pub l1_relative: f64,
    pub linf: f64,
}

pub fn norms(field: &'static str, q: &[f64], exact: &[f64], dx: f64) -> FieldError {
    let l1: f64 = q.iter().zip(exact).map(|(a, b)| (a - b).abs() * dx).sum();
    let scale: f64 = exact.iter().map(|b| b.abs() * dx).sum();
    let linf = q.iter().zip(exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    FieldError { field, l1, l1_relative: if scale > 0.0 { l1 / scale } else { l1 }, linf }
}

pub fn compare_oracle(table: &SnapshotTable, kind: OracleKind, config: &RunConfig) -> Result<Vec<FieldError>> {
    let t = table
        .t()
        .ok_or_else(|| CliError::Snapshot { path: String::new(), message: "header lacks `t`".into() })?;
    let xs = table.column("x").unwrap_or_default();
    let (x_min, x_max) = (table.meta_f64("x_min"), table.meta_f64("x_max"));
    if x_min != Some(config.x_min) || x_max != Some(config.x_max) || xs.is_empty() {
        return Err(CliError::Usage(format!(
            "snapshot domain {x_min:?}..{x_max:?} does not match the oracle domain {}..{}",
            config.x_min, config.x_max
        )));
    }
    let dx = (config.x_max - config.x_min) / xs.len() as f64;
    let exact = oracle_fields(kind, config, t, &xs, dx)?;
    Ok(kind
        .fields()
        .iter()
        .zip(exact)
        .map(|(&f, ex)| norms(f, &table.column(f).unwrap_or_default(), &ex, dx))
        .collect())
}
