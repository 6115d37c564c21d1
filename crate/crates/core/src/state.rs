//! Cell state containers.
//!
//! A phase stores its volume fraction next to its phase-intrinsic conserved
//! vector `U = (rho, rho u, rho E)`; the averaged cell quantity `alpha U` is
//! formed on demand. Keeping the factors apart makes `alpha rho` directly
//! observable, which the relaxation step must preserve.

use crate::eos::EosParams;
use crate::error::{DemError, Result};

/// Smallest volume fraction used to represent a (nearly) absent phase.
pub const VOLUME_FRACTION_FLOOR: f64 = 1e-6;

/// Tolerance on `alpha1 + alpha2 = 1`.
pub const SATURATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

impl Conserved {
    pub const fn new(mass: f64, momentum: f64, energy: f64) -> Self {
        Self { mass, momentum, energy }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.mass, self.momentum, self.energy]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.mass, s * self.momentum, s * self.energy)
    }
}

/// Exact Euler flux `[rho u, rho u^2 + p, u (rho E + p)]` of a primitive state.
pub fn physical_flux(v: &Primitive, eos: &EosParams) -> [f64; 3] {
    let e = eos.internal_energy_unchecked(v.rho, v.p);
    let rho_e_tot = v.rho * (e + 0.5 * v.u * v.u);
    [v.rho * v.u, v.rho * v.u * v.u + v.p, v.u * (rho_e_tot + v.p)]
}

pub fn prim_to_cons(v: &Primitive, eos: &EosParams) -> Result<Conserved> {
    eos.check_admissible(v.rho, v.p)?;
    Ok(prim_to_cons_unchecked(v, eos))
}

#[inline]
pub fn prim_to_cons_unchecked(v: &Primitive, eos: &EosParams) -> Conserved {
    let e = eos.internal_energy_unchecked(v.rho, v.p);
    Conserved::new(v.rho, v.rho * v.u, v.rho * (e + 0.5 * v.u * v.u))
}

pub fn cons_to_prim(c: &Conserved, eos: &EosParams) -> Result<Primitive> {
    let bad = || DemError::InadmissibleConserved {
        mass: c.mass,
        momentum: c.momentum,
        energy: c.energy,
    };
    if !(c.mass > 0.0) || !c.momentum.is_finite() || !c.energy.is_finite() {
        return Err(bad());
    }
    let v = cons_to_prim_unchecked(c, eos);
    if !(v.p + eos.pi_inf > 0.0) {
        return Err(bad());
    }
    Ok(v)
}

#[inline]
pub fn cons_to_prim_unchecked(c: &Conserved, eos: &EosParams) -> Primitive {
    let u = c.momentum / c.mass;
    let e = c.energy / c.mass - 0.5 * u * u;
    Primitive::new(c.mass, u, eos.pressure_from_energy(c.mass, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCellState {
    pub alpha: f64,
    /// Phase-intrinsic conserved vector.
    pub cons: Conserved,
}

impl PhaseCellState {
    pub fn from_primitive(alpha: f64, v: &Primitive, eos: &EosParams) -> Result<Self> {
        Ok(Self { alpha, cons: prim_to_cons(v, eos)? })
    }

    pub fn primitive(&self, eos: &EosParams) -> Result<Primitive> {
        cons_to_prim(&self.cons, eos)
    }

    /// The averaged cell quantity `alpha U`.
    pub fn alpha_cons(&self) -> [f64; 3] {
        self.cons.scale(self.alpha).to_array()
    }

    pub fn partial_mass(&self) -> f64 {
        self.alpha * self.cons.mass
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureCell {
    pub phase1: PhaseCellState,
    pub phase2: PhaseCellState,
}

impl MixtureCell {
    pub fn from_primitives(
        alpha1: f64,
        v1: &Primitive,
        v2: &Primitive,
        eos1: &EosParams,
        eos2: &EosParams,
    ) -> Result<Self> {
        let cell = Self {
            phase1: PhaseCellState::from_primitive(alpha1, v1, eos1)?,
            phase2: PhaseCellState::from_primitive(1.0 - alpha1, v2, eos2)?,
        };
        cell.validate(eos1, eos2)?;
        Ok(cell)
    }

    pub fn phase(&self, k: usize) -> &PhaseCellState {
        match k {
            0 => &self.phase1,
            _ => &self.phase2,
        }
    }

    pub fn phase_mut(&mut self, k: usize) -> &mut PhaseCellState {
        match k {
            0 => &mut self.phase1,
            _ => &mut self.phase2,
        }
    }

    /// Checks volume fractions in (0, 1), saturation, and per-phase admissibility.
    /// Errors carry the offending phase index (0 or 1) via [`DemError::Cell`] with cell 0;
    /// callers rewrap with the real cell index.
    pub fn validate(&self, eos1: &EosParams, eos2: &EosParams) -> Result<()> {
        for (k, (ph, eos)) in [(&self.phase1, eos1), (&self.phase2, eos2)].into_iter().enumerate() {
            if !(ph.alpha > 0.0 && ph.alpha < 1.0) {
                return Err(DemError::VolumeFraction { alpha: ph.alpha }.in_cell(0, k));
            }
            ph.primitive(eos).map_err(|e| e.in_cell(0, k))?;
        }
        let defect = self.phase1.alpha + self.phase2.alpha - 1.0;
        if defect.abs() > SATURATION_TOL {
            return Err(DemError::Saturation { defect });
        }
        Ok(())
    }

    pub fn primitives(&self, eos1: &EosParams, eos2: &EosParams) -> Result<(Primitive, Primitive)> {
        Ok((self.phase1.primitive(eos1)?, self.phase2.primitive(eos2)?))
    }
}

/// Mixture density, velocity and pressure of a cell:
/// `rho = sum alpha_k rho_k`, `u = sum alpha_k rho_k u_k / rho`, `p = sum alpha_k p_k`.
pub fn mixture_quantities(cell: &MixtureCell, eos1: &EosParams, eos2: &EosParams) -> Result<(f64, f64, f64)> {
    let (v1, v2) = cell.primitives(eos1, eos2)?;
    Ok(mixture_from_primitives(cell.phase1.alpha, &v1, cell.phase2.alpha, &v2))
}

pub fn mixture_from_primitives(a1: f64, v1: &Primitive, a2: f64, v2: &Primitive) -> (f64, f64, f64) {
    let m1 = a1 * v1.rho;
    let m2 = a2 * v2.rho;
    let rho = m1 + m2;
    let u = (m1 * v1.u + m2 * v2.u) / rho;
    let p = a1 * v1.p + a2 * v2.p;
    (rho, u, p)
}
