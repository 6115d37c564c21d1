//! The six reference shock-tube experiments.
//!
//! All use a gas (`gamma = 1.4`, `pi = 0`) as phase 1 and a stiffened liquid
//! (`gamma = 4.4`, `pi = 6e8 Pa`) as phase 2 on `[-1, 1]` with the diaphragm
//! at `x = 0` and CFL number 0.9.

use dem_core::regime::RegimePolicy;
use dem_core::scheme::PhaseInit;
use dem_core::{EosParams, RelaxationMode, RunConfig};

use crate::config::CliConfig;

pub const NAMES: [&str; 6] = [
    "t1_uniform_vf",
    "t2_relaxed",
    "t3_pure_phases",
    "t4_cavitation",
    "t5_piecewise_r",
    "t6_dense_to_dilute",
];

fn base(n_cells: usize, t_end: f64, left: [PhaseInit; 2], right: [PhaseInit; 2]) -> RunConfig {
    RunConfig {
        x_min: -1.0,
        x_max: 1.0,
        n_cells,
        t_end,
        cfl: 0.9,
        eos: [EosParams::air(), EosParams::water()],
        left,
        right,
        interface: 0.0,
        regime: RegimePolicy::Constant(0.0),
        relaxation: RelaxationMode::None,
        snapshots: Vec::new(),
        seed: 0,
    }
}

/// Uniform volume fraction with a strong pressure jump, no relaxation.
fn uniform_vf(n_cells: usize) -> RunConfig {
    base(
        n_cells,
        100e-6,
        [PhaseInit::new(0.5, 50.0, 0.0, 1e9), PhaseInit::new(0.5, 1000.0, 0.0, 1e9)],
        [PhaseInit::new(0.5, 50.0, 0.0, 1e5), PhaseInit::new(0.5, 1000.0, 0.0, 1e5)],
    )
}

pub fn preset(name: &str) -> Option<CliConfig> {
    let eps = 1e-6;
    let run = match name {
        "t1_uniform_vf" => uniform_vf(1000),
        "t2_relaxed" => RunConfig { relaxation: RelaxationMode::Continuous, ..uniform_vf(3000) },
        // liquid with a trace of gas on the left, gas with a trace of liquid on the right
        "t3_pure_phases" => RunConfig {
            relaxation: RelaxationMode::Continuous,
            ..base(
                1000,
                229e-6,
                [PhaseInit::new(eps, 50.0, 0.0, 2e8), PhaseInit::new(1.0 - eps, 1000.0, 0.0, 2e8)],
                [PhaseInit::new(1.0 - eps, 50.0, 0.0, 1e5), PhaseInit::new(eps, 1000.0, 0.0, 1e5)],
            )
        },
        // two diverging streams at equal pressure
        "t4_cavitation" => RunConfig {
            relaxation: RelaxationMode::Continuous,
            ..base(
                2000,
                2e-3,
                [PhaseInit::new(1e-2, 50.0, -10.0, 1e5), PhaseInit::new(1.0 - 1e-2, 1000.0, -10.0, 1e5)],
                [PhaseInit::new(1e-2, 50.0, 10.0, 1e5), PhaseInit::new(1.0 - 1e-2, 1000.0, 10.0, 1e5)],
            )
        },
        "t5_piecewise_r" => RunConfig {
            relaxation: RelaxationMode::Continuous,
            regime: RegimePolicy::reference_piecewise(),
            ..uniform_vf(2000)
        },
        "t6_dense_to_dilute" => RunConfig {
            relaxation: RelaxationMode::Continuous,
            regime: RegimePolicy::Stochastic { r0: 0.0, epsilon: 1e-3 },
            ..uniform_vf(3000)
        },
        _ => return None,
    };
    Some(CliConfig { run, output: None })
}
