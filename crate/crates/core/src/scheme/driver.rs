//! Operator-split time loop: hyperbolic step, relaxation, regime update.

use crate::eos::EosParams;
use crate::error::{DemError, Result};
use crate::regime::{RegimeField, RegimePolicy};
use crate::relaxation::{relax, RelaxationMode};
use crate::state::{MixtureCell, Primitive};

use super::{cfl_dt, hyperbolic_update_raw, reconstruct, Grid1D};

/// Initial volume fraction and primitive state of one phase on one side of the diaphragm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInit {
    pub alpha: f64,
    pub state: Primitive,
}

impl PhaseInit {
    pub const fn new(alpha: f64, rho: f64, u: f64, p: f64) -> Self {
        Self { alpha, state: Primitive::new(rho, u, p) }
    }
}

/// A two-state shock-tube problem and its numerical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub eos: [EosParams; 2],
    pub left: [PhaseInit; 2],
    pub right: [PhaseInit; 2],
    /// Diaphragm position.
    pub interface: f64,
    pub regime: RegimePolicy,
    pub relaxation: RelaxationMode,
    /// Extra output times; the final time is always included.
    pub snapshots: Vec<f64>,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 3 {
            return Err(DemError::InvalidGrid(format!("need at least 3 cells, got {}", self.n_cells)));
        }
        if !(self.x_max > self.x_min) {
            return Err(DemError::InvalidGrid(format!("empty domain [{}, {}]", self.x_min, self.x_max)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(DemError::InvalidGrid(format!("end time must be >= 0, got {}", self.t_end)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(DemError::InvalidGrid(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.interface >= self.x_min && self.interface <= self.x_max) {
            return Err(DemError::InvalidGrid(format!("diaphragm at {} outside the domain", self.interface)));
        }
        if let Some(t) = self.snapshots.iter().find(|&&t| !(t >= 0.0 && t <= self.t_end)) {
            return Err(DemError::InvalidGrid(format!("snapshot time {t} outside [0, {}]", self.t_end)));
        }
        self.regime.validate()?;
        for side in [&self.left, &self.right] {
            side_cell(side, &self.eos)?;
        }
        Ok(())
    }

    pub fn initial_grid(&self) -> Result<Grid1D> {
        self.validate()?;
        let left = side_cell(&self.left, &self.eos)?;
        let right = side_cell(&self.right, &self.eos)?;
        let dx = (self.x_max - self.x_min) / self.n_cells as f64;
        let cells = (0..self.n_cells)
            .map(|i| if self.x_min + (i as f64 + 0.5) * dx < self.interface { left } else { right })
            .collect();
        Grid1D::new(self.x_min, self.x_max, cells, self.eos)
    }
}

fn side_cell(side: &[PhaseInit; 2], eos: &[EosParams; 2]) -> Result<MixtureCell> {
    let defect = side[0].alpha + side[1].alpha - 1.0;
    if defect.abs() > crate::state::SATURATION_TOL {
        return Err(DemError::Saturation { defect });
    }
    let mut cell = MixtureCell::from_primitives(side[0].alpha, &side[0].state, &side[1].state, &eos[0], &eos[1])?;
    cell.phase2.alpha = side[1].alpha;
    Ok(cell)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub grid: Grid1D,
    /// Regime values on the `n_cells + 1` interfaces at time `t`.
    pub regime: Vec<f64>,
}

/// Bookkeeping for one completed time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub t: f64,
    pub dt: f64,
    /// Per-phase total mass before the step.
    pub mass_before: [f64; 2],
    /// Per-phase total mass after the hyperbolic sub-step.
    pub mass_after_hyperbolic: [f64; 2],
    /// Net conservative mass entering through the domain faces, per phase.
    pub boundary_mass_inflow: [f64; 2],
    /// Cells after the hyperbolic sub-step, before relaxation.
    pub pre_relaxation: Vec<MixtureCell>,
}

/// A running simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: RunConfig,
    pub grid: Grid1D,
    pub regime: RegimeField,
    pub t: f64,
    pub steps: usize,
}

impl Simulation {
    pub fn new(config: RunConfig) -> Result<Self> {
        let grid = config.initial_grid()?;
        let regime = RegimeField::new(config.regime.clone(), config.x_min, config.x_max, config.n_cells, config.seed)?;
        Ok(Self { config, grid, regime, t: 0.0, steps: 0 })
    }

    /// Advances by one CFL-limited step, never stepping past `t_stop`.
    pub fn step(&mut self, t_stop: f64) -> Result<StepReport> {
        let t = self.t;
        let dt_cfl = cfl_dt(&self.grid, self.config.cfl).map_err(|e| e.at_time(t))?;
        let dt = dt_cfl.min(t_stop - t);
        let mass_before = self.grid.phase_masses();
        let raw = hyperbolic_update_raw(&self.grid, &self.regime, dt).map_err(|e| e.at_time(t))?;
        let cells = reconstruct(&raw, &self.grid).map_err(|e| e.at_time(t))?;
        let pre_relaxation = cells.clone();
        self.grid.cells = cells;
        let mass_after_hyperbolic = self.grid.phase_masses();

        let [eos1, eos2] = self.grid.eos;
        let mode = self.config.relaxation;
        if mode != RelaxationMode::None {
            for (i, c) in self.grid.cells.iter_mut().enumerate() {
                *c = relax(c, mode, &eos1, &eos2).map_err(|e| relocate_cell(e, i).at_time(t))?;
            }
        }
        self.regime.update();
        self.steps += 1;
        // land exactly on the stop time when the step was clipped
        self.t = if dt < dt_cfl { t_stop } else { t + dt };
        Ok(StepReport {
            t: self.t,
            dt,
            mass_before,
            mass_after_hyperbolic,
            boundary_mass_inflow: raw.boundary_mass_inflow,
            pre_relaxation,
        })
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { t: self.t, grid: self.grid.clone(), regime: self.regime.values.clone() }
    }

    /// Runs to the end time, calling `observe` after every step, and returns
    /// the requested snapshots in time order.
    pub fn run_observed(mut self, mut observe: impl FnMut(&Simulation, &StepReport) -> Result<()>) -> Result<Vec<Snapshot>> {
        let mut times: Vec<f64> = self.config.snapshots.clone();
        times.push(self.config.t_end);
        times.sort_by(f64::total_cmp);
        times.dedup();
        let mut out = Vec::with_capacity(times.len());
        for target in times {
            while self.t < target {
                let report = self.step(target)?;
                observe(&self, &report)?;
            }
            out.push(self.snapshot());
        }
        Ok(out)
    }
}

fn relocate_cell(e: DemError, i: usize) -> DemError {
    match e {
        DemError::Cell { phase, source, .. } => DemError::Cell { cell: i, phase, source },
        other => other.in_cell(i, 0),
    }
}

pub fn run(config: &RunConfig) -> Result<Vec<Snapshot>> {
    Simulation::new(config.clone())?.run_observed(|_, _| Ok(()))
}
