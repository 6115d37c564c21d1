//! Infinite-drag pressure and velocity relaxation of a single cell.
//!
//! Both strategies drive the cell onto the equilibrium variety `u1 = u2`,
//! `p1 = p2`. The continuous strategy solves the nonlinear energy balance by
//! Newton iteration and conserves phase masses, mixture momentum and mixture
//! energy. The projection strategy applies a linear projection built from the
//! pre-relaxation state; it is cheaper and accurate to second order in the
//! disequilibrium.

use std::fmt;
use std::str::FromStr;

use crate::eos::EosParams;
use crate::error::{DemError, Result};
use crate::state::{prim_to_cons, MixtureCell, PhaseCellState, Primitive};

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 100;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelaxationMode {
    #[default]
    None,
    Continuous,
    Projection,
}

impl fmt::Display for RelaxationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelaxationMode::None => "none",
            RelaxationMode::Continuous => "continuous",
            RelaxationMode::Projection => "projection",
        })
    }
}

impl FromStr for RelaxationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(RelaxationMode::None),
            "continuous" => Ok(RelaxationMode::Continuous),
            "projection" => Ok(RelaxationMode::Projection),
            other => Err(format!("unknown relaxation mode `{other}` (expected none, continuous or projection)")),
        }
    }
}

/// Reduced variables of an equilibrium cell: one velocity and one pressure
/// shared by both phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedEquilibrium {
    pub alpha1: f64,
    pub rho1: f64,
    pub u: f64,
    pub p: f64,
    pub alpha2: f64,
    pub rho2: f64,
}

impl ReducedEquilibrium {
    pub fn to_array(self) -> [f64; 6] {
        [self.alpha1, self.rho1, self.u, self.p, self.alpha2, self.rho2]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self { alpha1: a[0], rho1: a[1], u: a[2], p: a[3], alpha2: a[4], rho2: a[5] }
    }
}

/// Rebuilds a full cell from reduced equilibrium variables.
pub fn maxwellian(red: &ReducedEquilibrium, eos1: &EosParams, eos2: &EosParams) -> Result<MixtureCell> {
    let cell = MixtureCell {
        phase1: PhaseCellState {
            alpha: red.alpha1,
            cons: prim_to_cons(&Primitive::new(red.rho1, red.u, red.p), eos1).map_err(|e| e.in_cell(0, 0))?,
        },
        phase2: PhaseCellState {
            alpha: red.alpha2,
            cons: prim_to_cons(&Primitive::new(red.rho2, red.u, red.p), eos2).map_err(|e| e.in_cell(0, 1))?,
        },
    };
    for (k, a) in [red.alpha1, red.alpha2].into_iter().enumerate() {
        if !(a > 0.0 && a < 1.0) {
            return Err(DemError::VolumeFraction { alpha: a }.in_cell(0, k));
        }
    }
    Ok(cell)
}

pub fn relax(cell: &MixtureCell, mode: RelaxationMode, eos1: &EosParams, eos2: &EosParams) -> Result<MixtureCell> {
    match mode {
        RelaxationMode::None => Ok(*cell),
        RelaxationMode::Continuous => relax_continuous(cell, eos1, eos2),
        RelaxationMode::Projection => relax_projection(cell, eos1, eos2),
    }
}

/// Outcome of the Newton solve of the continuous strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonReport {
    pub state: ReducedEquilibrium,
    pub iterations: usize,
    /// Scaled residual norm at the returned state.
    pub residual: f64,
}

pub fn relax_continuous(cell: &MixtureCell, eos1: &EosParams, eos2: &EosParams) -> Result<MixtureCell> {
    let report = solve_equilibrium(cell, eos1, eos2)?;
    maxwellian(&report.state, eos1, eos2)
}

/// Newton iteration for `(rho1, rho2, p)` with the mass-weighted velocity.
pub fn solve_equilibrium(cell: &MixtureCell, eos1: &EosParams, eos2: &EosParams) -> Result<NewtonReport> {
    let (v1, v2) = cell.primitives(eos1, eos2)?;
    let eos = [*eos1, *eos2];
    let v0 = [v1, v2];
    let m = [cell.phase1.partial_mass(), cell.phase2.partial_mass()];
    let u_star = (m[0] * v1.u + m[1] * v2.u) / (m[0] + m[1]);
    let e0 = [
        eos1.internal_energy_unchecked(v1.rho, v1.p),
        eos2.internal_energy_unchecked(v2.rho, v2.p),
    ];
    let du2 = [(u_star - v1.u).powi(2), (u_star - v2.u).powi(2)];

    let z1 = v1.rho * eos1.sound_speed_unchecked(v1.rho, v1.p);
    let z2 = v2.rho * eos2.sound_speed_unchecked(v2.rho, v2.p);
    let mut rho = [v1.rho, v2.rho];
    let mut p = (z1 * v2.p + z2 * v1.p) / (z1 + z2);

    let pi_max = eos1.pi_inf.max(eos2.pi_inf);
    let energy_scale = |k: usize, p: f64| {
        v0[k].rho * (p.abs() + eos[k].gamma * eos[k].pi_inf + v0[k].p.abs() + v0[k].rho * du2[k])
    };
    let residual = |rho: [f64; 2], p: f64| -> ([f64; 3], f64) {
        let mut f = [0.0; 3];
        let mut norm: f64 = 0.0;
        for k in 0..2 {
            let e = eos[k].internal_energy_unchecked(rho[k], p);
            f[k] = 2.0 * rho[k] * v0[k].rho * (e - e0[k]) - rho[k] * v0[k].rho * du2[k] - 2.0 * p * (rho[k] - v0[k].rho);
            norm = norm.max(f[k].abs() / energy_scale(k, p));
        }
        f[2] = m[0] / rho[0] + m[1] / rho[1] - 1.0;
        (f, norm.max(f[2].abs()))
    };

    let (mut f, mut res) = residual(rho, p);
    let mut increment = 0.0;
    let mut iterations = 0;
    while !(res < NEWTON_TOL && increment < NEWTON_TOL) {
        if iterations == NEWTON_MAX_ITER {
            return Err(DemError::NewtonNoConvergence { iterations });
        }
        iterations += 1;

        let mut a = [0.0; 2];
        let mut b = [0.0; 2];
        let mut c = [0.0; 2];
        for k in 0..2 {
            let e = eos[k].internal_energy_unchecked(rho[k], p);
            a[k] = 2.0 * v0[k].rho * (e - e0[k]) + 2.0 * rho[k] * v0[k].rho * eos[k].de_drho(rho[k], p)
                - v0[k].rho * du2[k]
                - 2.0 * p;
            b[k] = 2.0 * rho[k] * v0[k].rho * eos[k].de_dp(rho[k]) - 2.0 * (rho[k] - v0[k].rho);
            c[k] = -m[k] / (rho[k] * rho[k]);
        }
        let det = -a[0] * b[1] * c[1] - a[1] * b[0] * c[0];
        let det_scale = (a[0] * b[1] * c[1]).abs() + (a[1] * b[0] * c[0]).abs();
        if !(det.abs() > 1e-14 * det_scale) || a[0] == 0.0 || a[1] == 0.0 {
            return Err(DemError::SingularJacobian { det });
        }
        // eliminate the density increments through the first two rows
        let dp = (f[2] - c[0] * f[0] / a[0] - c[1] * f[1] / a[1]) / (c[0] * b[0] / a[0] + c[1] * b[1] / a[1]);
        let drho = [(-f[0] - b[0] * dp) / a[0], (-f[1] - b[1] * dp) / a[1]];

        let mut lambda = 1.0;
        let mut halvings = 0;
        loop {
            let trial_rho = [rho[0] + lambda * drho[0], rho[1] + lambda * drho[1]];
            let trial_p = p + lambda * dp;
            let admissible = trial_rho[0] > 0.0
                && trial_rho[1] > 0.0
                && trial_p + eos1.pi_inf > 0.0
                && trial_p + eos2.pi_inf > 0.0
                && trial_p.is_finite();
            if admissible {
                rho = trial_rho;
                p = trial_p;
                break;
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(DemError::NewtonDampingFailed);
            }
            lambda *= 0.5;
        }
        increment = (lambda * drho[0] / rho[0])
            .abs()
            .max((lambda * drho[1] / rho[1]).abs())
            .max((lambda * dp).abs() / (p.abs() + pi_max));
        (f, res) = residual(rho, p);
    }

    Ok(NewtonReport {
        state: ReducedEquilibrium {
            alpha1: m[0] / rho[0],
            rho1: rho[0],
            u: u_star,
            p,
            alpha2: m[1] / rho[1],
            rho2: rho[1],
        },
        iterations,
        residual: res,
    })
}

/// The 8-entry primitive vector `(alpha1, rho1, u1, p1, alpha2, rho2, u2, p2)`.
pub fn primitive_vector(cell: &MixtureCell, eos1: &EosParams, eos2: &EosParams) -> Result<[f64; 8]> {
    let (v1, v2) = cell.primitives(eos1, eos2)?;
    Ok([cell.phase1.alpha, v1.rho, v1.u, v1.p, cell.phase2.alpha, v2.rho, v2.u, v2.p])
}

/// Projection onto the reduced variables, linearized at the state `v` with
/// phase sound speeds `a1`, `a2`.
pub fn projection_matrix(v: &[f64; 8], a1: f64, a2: f64) -> Result<[[f64; 8]; 6]> {
    let [al1, rho1, _, _, al2, rho2, _, _] = *v;
    let (m1, m2) = (al1 * rho1, al2 * rho2);
    let d = al1 * rho2 * a2 * a2 + al2 * rho1 * a1 * a1;
    if !(d > 0.0) || !d.is_finite() {
        return Err(DemError::DegenerateImpedance { d });
    }
    let aa = al1 * al2 / d;
    let wm1 = m1 / (m1 + m2);
    let wm2 = m2 / (m1 + m2);
    Ok([
        [1.0, 0.0, 0.0, aa, 0.0, 0.0, 0.0, -aa],
        [0.0, 1.0, 0.0, -al2 * rho1 / d, 0.0, 0.0, 0.0, al2 * rho1 / d],
        [0.0, 0.0, wm1, 0.0, 0.0, 0.0, wm2, 0.0],
        [0.0, 0.0, 0.0, al1 * rho2 * a2 * a2 / d, 0.0, 0.0, 0.0, al2 * rho1 * a1 * a1 / d],
        [0.0, 0.0, 0.0, -aa, 1.0, 0.0, 0.0, aa],
        [0.0, 0.0, 0.0, al1 * rho2 / d, 0.0, 1.0, 0.0, -al1 * rho2 / d],
    ])
}

/// Jacobian of the Maxwellian in primitive variables: the identity on the six
/// reduced variables, with `u` and `p` repeated for phase 2.
pub fn maxwellian_jacobian() -> [[f64; 6]; 8] {
    let mut dm = [[0.0; 6]; 8];
    for (i, row) in dm.iter_mut().enumerate().take(6) {
        row[i] = 1.0;
    }
    dm[6][2] = 1.0;
    dm[7][3] = 1.0;
    dm
}

/// The two directions spanned by the relaxation source at `v`, in primitive variables.
pub fn relaxation_directions(v: &[f64; 8], a1: f64, a2: f64) -> [[f64; 8]; 2] {
    let [al1, rho1, _, _, al2, rho2, _, _] = *v;
    [
        [1.0, -rho1 / al1, 0.0, -rho1 * a1 * a1 / al1, -1.0, rho2 / al2, 0.0, rho2 * a2 * a2 / al2],
        [0.0, 0.0, 1.0 / (al1 * rho1), 0.0, 0.0, 0.0, -1.0 / (al2 * rho2), 0.0],
    ]
}

pub fn relax_projection(cell: &MixtureCell, eos1: &EosParams, eos2: &EosParams) -> Result<MixtureCell> {
    let v = primitive_vector(cell, eos1, eos2)?;
    let a1 = eos1.sound_speed(v[1], v[3])?;
    let a2 = eos2.sound_speed(v[5], v[7])?;
    let pi = projection_matrix(&v, a1, a2)?;
    let mut red = [0.0; 6];
    for (r, row) in red.iter_mut().zip(pi.iter()) {
        *r = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    maxwellian(&ReducedEquilibrium::from_array(red), eos1, eos2)
}
