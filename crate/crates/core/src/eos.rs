//! Stiffened-gas equation of state, `p = (gamma - 1) rho e - gamma pi_inf`.
//!
//! Gases use `pi_inf = 0`; liquids use a large reference pressure. A state is
//! admissible when `rho > 0` and `p + pi_inf > 0`.

use crate::error::{DemError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosParams {
    pub gamma: f64,
    /// Reference pressure in Pa.
    pub pi_inf: f64,
}

impl EosParams {
    pub fn new(gamma: f64, pi_inf: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) || !(pi_inf >= 0.0 && pi_inf.is_finite()) {
            return Err(DemError::InvalidEos { gamma, pi_inf });
        }
        Ok(Self { gamma, pi_inf })
    }

    /// Ideal gas, `gamma = 1.4`, `pi_inf = 0`.
    pub const fn air() -> Self {
        Self { gamma: 1.4, pi_inf: 0.0 }
    }

    /// Stiffened water, `gamma = 4.4`, `pi_inf = 6e8 Pa`.
    pub const fn water() -> Self {
        Self { gamma: 4.4, pi_inf: 6.0e8 }
    }

    pub fn check_admissible(&self, rho: f64, p: f64) -> Result<()> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(DemError::InadmissibleState { rho, p, reason: "non-positive density" });
        }
        if !(p + self.pi_inf > 0.0) || !p.is_finite() {
            return Err(DemError::InadmissibleState { rho, p, reason: "p + pi_inf <= 0" });
        }
        Ok(())
    }

    /// Specific internal energy `e(rho, p)`.
    pub fn internal_energy(&self, rho: f64, p: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(DemError::InadmissibleState { rho, p, reason: "non-positive density" });
        }
        if !(p + self.gamma * self.pi_inf > 0.0) {
            return Err(DemError::InadmissibleState { rho, p, reason: "p + gamma pi_inf <= 0" });
        }
        Ok(self.internal_energy_unchecked(rho, p))
    }

    #[inline]
    pub fn internal_energy_unchecked(&self, rho: f64, p: f64) -> f64 {
        (p + self.gamma * self.pi_inf) / ((self.gamma - 1.0) * rho)
    }

    /// Pressure from density and specific internal energy. Callers validate
    /// the result against [`EosParams::check_admissible`].
    #[inline]
    pub fn pressure_from_energy(&self, rho: f64, e: f64) -> f64 {
        (self.gamma - 1.0) * rho * e - self.gamma * self.pi_inf
    }

    pub fn sound_speed(&self, rho: f64, p: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(DemError::InadmissibleState { rho, p, reason: "non-positive density" });
        }
        let radicand = self.gamma * (p + self.pi_inf) / rho;
        if !(radicand > 0.0) || !radicand.is_finite() {
            return Err(DemError::InadmissibleState { rho, p, reason: "non-hyperbolic state" });
        }
        Ok(radicand.sqrt())
    }

    #[inline]
    pub fn sound_speed_unchecked(&self, rho: f64, p: f64) -> f64 {
        (self.gamma * (p + self.pi_inf) / rho).sqrt()
    }

    /// `d e / d rho` at constant pressure.
    #[inline]
    pub fn de_drho(&self, rho: f64, p: f64) -> f64 {
        -(p + self.gamma * self.pi_inf) / ((self.gamma - 1.0) * rho * rho)
    }

    /// `d e / d p` at constant density.
    #[inline]
    pub fn de_dp(&self, rho: f64) -> f64 {
        1.0 / ((self.gamma - 1.0) * rho)
    }

    /// Sound speed from the general expression
    /// `a^2 = p / (rho^2 e_p) - e_rho / e_p`, used to cross-check [`EosParams::sound_speed`].
    pub fn sound_speed_from_partials(&self, rho: f64, p: f64) -> f64 {
        let e_p = self.de_dp(rho);
        let e_rho = self.de_drho(rho, p);
        (p / (rho * rho * e_p) - e_rho / e_p).sqrt()
    }
}
