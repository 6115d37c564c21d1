//! The semi-discrete DEM operator and its forward-Euler time step.
//!
//! At every interface four Riemann problems are solved, one per ordered pair
//! of phases. The conservative ensemble flux of phase `k` collects the
//! same-phase flux and each cross-phase flux whose Godunov state belongs to
//! `k`. Cross-phase contacts that move into a cell exchange a Lagrangian flux
//! `p* [0, 1, sigma]` between the two phases of that cell, and move volume
//! fraction with them.

mod driver;

pub use driver::{run, PhaseInit, RunConfig, Simulation, Snapshot, StepReport};

use crate::eos::EosParams;
use crate::error::{DemError, Result};
use crate::probability::{convex_quad_unchecked, AlphaPair};
use crate::regime::RegimeField;
use crate::riemann::{hllc, lagrangian_flux, RiemannFan};
use crate::state::{cons_to_prim, Conserved, MixtureCell, PhaseCellState, Primitive, SATURATION_TOL};

/// Ghost cells per side.
pub const N_GHOST: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: Vec<MixtureCell>,
    pub eos: [EosParams; 2],
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, cells: Vec<MixtureCell>, eos: [EosParams; 2]) -> Result<Self> {
        if cells.len() < 3 {
            return Err(DemError::InvalidGrid(format!("need at least 3 cells, got {}", cells.len())));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(DemError::InvalidGrid(format!("empty domain [{x_min}, {x_max}]")));
        }
        let grid = Self { x_min, x_max, cells, eos };
        for (i, c) in grid.cells.iter().enumerate() {
            c.validate(&eos[0], &eos[1]).map_err(|e| relocate(e, i))?;
        }
        Ok(grid)
    }

    /// Uniform grid holding one cell state everywhere.
    pub fn uniform(x_min: f64, x_max: f64, n_cells: usize, cell: MixtureCell, eos: [EosParams; 2]) -> Result<Self> {
        Self::new(x_min, x_max, vec![cell; n_cells], eos)
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells.len() as f64
    }

    pub fn x_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn x_interface(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    /// `sum_i (alpha_k rho_k)_i dx` per phase.
    pub fn phase_masses(&self) -> [f64; 2] {
        let dx = self.dx();
        let mut m = [0.0; 2];
        for c in &self.cells {
            m[0] += c.phase1.partial_mass() * dx;
            m[1] += c.phase2.partial_mass() * dx;
        }
        m
    }

    pub fn primitives(&self) -> Result<Vec<[Primitive; 2]>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (a, b) = c.primitives(&self.eos[0], &self.eos[1]).map_err(|e| relocate(e, i))?;
                Ok([a, b])
            })
            .collect()
    }
}

/// Moves a cell-0 error produced by [`MixtureCell::validate`] to cell `i`.
fn relocate(e: DemError, i: usize) -> DemError {
    match e {
        DemError::Cell { phase, source, .. } => DemError::Cell { cell: i, phase, source },
        other => other.in_cell(i, 0),
    }
}

/// `+1` for `sigma >= 0`, `-1` otherwise.
pub fn beta(sigma: f64) -> f64 {
    if sigma >= 0.0 { 1.0 } else { -1.0 }
}

#[inline]
fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Everything the cell updates need from one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFluxSet {
    /// `fans[a][b]` solves phase `a` of the left cell against phase `b` of the right cell.
    pub fans: [[RiemannFan; 2]; 2],
    /// `prob[a][b]` is the probability of phase `a` on the left and `b` on the right.
    pub prob: [[f64; 2]; 2],
    pub r: f64,
}

impl InterfaceFluxSet {
    pub fn new(left: &[Primitive; 2], right: &[Primitive; 2], alpha1: AlphaPair, r: f64, eos: &[EosParams; 2]) -> Result<Self> {
        let fan = |a: usize, b: usize| hllc(&left[a], &right[b], &eos[a], &eos[b]).map_err(|e| e.in_cell(0, a));
        let q = convex_quad_unchecked(alpha1, r);
        Ok(Self {
            fans: [[fan(0, 0)?, fan(0, 1)?], [fan(1, 0)?, fan(1, 1)?]],
            prob: [[q.p_kk, q.p_kl], [q.p_lk, q.p_ll]],
            r,
        })
    }

    pub fn beta(&self, a: usize, b: usize) -> f64 {
        beta(self.fans[a][b].sigma)
    }
}

/// Conservative ensemble flux of each phase through one interface.
pub fn ensemble_flux(set: &InterfaceFluxSet) -> [[f64; 3]; 2] {
    let mut out = [[0.0; 3]; 2];
    for (k, flux) in out.iter_mut().enumerate() {
        let l = 1 - k;
        let w_kk = set.prob[k][k];
        let w_kl = pos(set.beta(k, l)) * set.prob[k][l];
        let w_lk = pos(-set.beta(l, k)) * set.prob[l][k];
        for c in 0..3 {
            flux[c] = w_kk * set.fans[k][k].flux0[c] + w_kl * set.fans[k][l].flux0[c] + w_lk * set.fans[l][k].flux0[c];
        }
    }
    out
}

/// Signed sum of the Lagrangian terms received by phase `k` of the cell
/// between interfaces `left` and `right`.
fn lagrangian_sum<const N: usize>(
    left: &InterfaceFluxSet,
    right: &InterfaceFluxSet,
    k: usize,
    flux: impl Fn(&RiemannFan) -> [f64; N],
) -> [f64; N] {
    let l = 1 - k;
    // contacts entering through the left face
    let in_lk = pos(left.beta(l, k)) * left.prob[l][k];
    let in_kl = pos(left.beta(k, l)) * left.prob[k][l];
    // contacts entering through the right face
    let out_lk = pos(-right.beta(l, k)) * right.prob[l][k];
    let out_kl = pos(-right.beta(k, l)) * right.prob[k][l];
    let (f1, f2) = (flux(&left.fans[l][k]), flux(&left.fans[k][l]));
    let (f3, f4) = (flux(&right.fans[l][k]), flux(&right.fans[k][l]));
    let mut out = [0.0; N];
    for c in 0..N {
        out[c] = in_lk * f1[c] - in_kl * f2[c] + out_lk * f3[c] - out_kl * f4[c];
    }
    out
}

/// Boundary Lagrangian term of both phases for a cell with the given faces.
pub fn boundary_lagrangian(left: &InterfaceFluxSet, right: &InterfaceFluxSet) -> [[f64; 3]; 2] {
    [
        lagrangian_sum(left, right, 0, lagrangian_flux),
        lagrangian_sum(left, right, 1, lagrangian_flux),
    ]
}

/// Volume-fraction counterpart of [`boundary_lagrangian`]: no conservative
/// flux and a Lagrangian flux of `-sigma`. The cell update is
/// `alpha += dt / dx * rhs`.
pub fn volume_fraction_rhs(left: &InterfaceFluxSet, right: &InterfaceFluxSet) -> [f64; 2] {
    let lag = |f: &RiemannFan| [-f.sigma];
    [lagrangian_sum(left, right, 0, lag)[0], lagrangian_sum(left, right, 1, lag)[0]]
}

/// Interior cells padded with [`N_GHOST`] zero-gradient copies on each side.
pub fn apply_bc(grid: &Grid1D) -> Vec<MixtureCell> {
    let n = grid.cells.len();
    let mut ext = Vec::with_capacity(n + 2 * N_GHOST);
    ext.extend(std::iter::repeat_n(grid.cells[0], N_GHOST));
    ext.extend_from_slice(&grid.cells);
    ext.extend(std::iter::repeat_n(grid.cells[n - 1], N_GHOST));
    ext
}

pub fn cfl_dt(grid: &Grid1D, cfl: f64) -> Result<f64> {
    let mut smax: f64 = 0.0;
    for (i, c) in grid.cells.iter().enumerate() {
        for k in 0..2 {
            let v = c.phase(k).primitive(&grid.eos[k]).map_err(|e| e.in_cell(i, k))?;
            let s = v.u.abs() + grid.eos[k].sound_speed(v.rho, v.p).map_err(|e| e.in_cell(i, k))?;
            if !s.is_finite() {
                return Err(DemError::NonFiniteWaveSpeed { cell: i });
            }
            smax = smax.max(s);
        }
    }
    if !(smax > 0.0) {
        return Err(DemError::NonFiniteWaveSpeed { cell: 0 });
    }
    Ok(cfl * grid.dx() / smax)
}

/// Interface data for the `n_cells + 1` faces of the grid, including the domain boundaries.
pub fn interface_fluxes(grid: &Grid1D, regime: &RegimeField) -> Result<Vec<InterfaceFluxSet>> {
    let n = grid.n_cells();
    if regime.values.len() != n + 1 {
        return Err(DemError::InvalidGrid(format!(
            "regime field has {} interfaces, grid needs {}",
            regime.values.len(),
            n + 1
        )));
    }
    let ext = apply_bc(grid);
    let prims: Vec<[Primitive; 2]> = ext
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let cell = j.saturating_sub(N_GHOST).min(n - 1);
            let a = c.phase1.primitive(&grid.eos[0]).map_err(|e| e.in_cell(cell, 0))?;
            let b = c.phase2.primitive(&grid.eos[1]).map_err(|e| e.in_cell(cell, 1))?;
            Ok([a, b])
        })
        .collect::<Result<_>>()?;
    (0..=n)
        .map(|j| {
            let (il, ir) = (j + N_GHOST - 1, j + N_GHOST);
            let alpha = AlphaPair { alpha_left: ext[il].phase1.alpha, alpha_right: ext[ir].phase1.alpha };
            InterfaceFluxSet::new(&prims[il], &prims[ir], alpha, regime.values[j], &grid.eos).map_err(|e| match e {
                DemError::Cell { phase, source, .. } => DemError::Cell { cell: j.min(n - 1), phase, source },
                other => other,
            })
        })
        .collect()
}

/// Unreconstructed result of one forward-Euler step.
#[derive(Debug, Clone, PartialEq)]
pub struct RawUpdate {
    /// Per cell and phase: `[alpha, alpha rho, alpha rho u, alpha rho E]`.
    pub cells: Vec<[[f64; 4]; 2]>,
    /// Net conservative mass entering through the two domain faces over the step, per phase.
    pub boundary_mass_inflow: [f64; 2],
}

/// Forward-Euler update of the averaged variables without any admissibility check.
pub fn hyperbolic_update_raw(grid: &Grid1D, regime: &RegimeField, dt: f64) -> Result<RawUpdate> {
    let faces = interface_fluxes(grid, regime)?;
    let fluxes: Vec<[[f64; 3]; 2]> = faces.iter().map(ensemble_flux).collect();
    let lam = dt / grid.dx();
    let cells = grid
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (fl, fr) = (&faces[i], &faces[i + 1]);
            let lag = boundary_lagrangian(fl, fr);
            let dalpha = volume_fraction_rhs(fl, fr);
            let mut out = [[0.0; 4]; 2];
            for k in 0..2 {
                let ph = c.phase(k);
                let au = ph.alpha_cons();
                out[k][0] = ph.alpha + lam * dalpha[k];
                for m in 0..3 {
                    let g = fluxes[i + 1][k][m] - fluxes[i][k][m] - lag[k][m];
                    out[k][m + 1] = au[m] - lam * g;
                }
            }
            out
        })
        .collect();
    let n = grid.n_cells();
    let boundary_mass_inflow = [
        dt * (fluxes[0][0][0] - fluxes[n][0][0]),
        dt * (fluxes[0][1][0] - fluxes[n][1][0]),
    ];
    Ok(RawUpdate { cells, boundary_mass_inflow })
}

/// Rebuilds phase states from averaged variables, rejecting anything inadmissible.
pub fn reconstruct(raw: &RawUpdate, grid: &Grid1D) -> Result<Vec<MixtureCell>> {
    raw.cells
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut phases = [grid.cells[i].phase1; 2];
            for k in 0..2 {
                let alpha = v[k][0];
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(DemError::VolumeFraction { alpha }.in_cell(i, k));
                }
                let cons = Conserved::new(v[k][1] / alpha, v[k][2] / alpha, v[k][3] / alpha);
                cons_to_prim(&cons, &grid.eos[k]).map_err(|e| e.in_cell(i, k))?;
                phases[k] = PhaseCellState { alpha, cons };
            }
            let defect = phases[0].alpha + phases[1].alpha - 1.0;
            if defect.abs() > SATURATION_TOL {
                return Err(DemError::Saturation { defect }.in_cell(i, 0));
            }
            Ok(MixtureCell { phase1: phases[0], phase2: phases[1] })
        })
        .collect()
}

/// One forward-Euler step of the hyperbolic operator.
pub fn hyperbolic_step(grid: &Grid1D, regime: &RegimeField, dt: f64) -> Result<Grid1D> {
    let raw = hyperbolic_update_raw(grid, regime, dt)?;
    Ok(Grid1D { cells: reconstruct(&raw, grid)?, ..grid.clone() })
}
