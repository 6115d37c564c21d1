use crate::eos::EosParams;
use crate::error::{DemError, Result};
use crate::state::{physical_flux, prim_to_cons_unchecked, Conserved, Primitive};

/// Solution of an approximate Riemann problem at one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannFan {
    /// Flux of the sampled solution at `x/t = 0`.
    pub flux0: [f64; 3],
    /// Contact speed.
    pub sigma: f64,
    pub p_star: f64,
    /// Godunov state at `x/t = 0`.
    pub u_star0: Conserved,
    pub s_left: f64,
    pub s_right: f64,
    /// Star states on each side of the contact.
    pub star_left: Conserved,
    pub star_right: Conserved,
}

/// HLLC solver with a separate stiffened-gas EOS on each side and Davis wave
/// speed estimates.
pub fn hllc(left: &Primitive, right: &Primitive, eos_left: &EosParams, eos_right: &EosParams) -> Result<RiemannFan> {
    eos_left.check_admissible(left.rho, left.p)?;
    eos_right.check_admissible(right.rho, right.p)?;
    let a_l = eos_left.sound_speed_unchecked(left.rho, left.p);
    let a_r = eos_right.sound_speed_unchecked(right.rho, right.p);

    let s_l = (left.u - a_l).min(right.u - a_r);
    let s_r = (left.u + a_l).max(right.u + a_r);
    if !(s_l < s_r) {
        return Err(DemError::WaveSpeedCrossing { s_left: s_l, s_right: s_r });
    }

    // Acoustic impedances of the outer waves, both positive.
    let z_l = left.rho * (left.u - s_l);
    let z_r = right.rho * (s_r - right.u);
    let s_star = (z_l * left.u + z_r * right.u - (right.p - left.p)) / (z_l + z_r);
    let p_star = left.p + z_l * (left.u - s_star);

    let cons_l = prim_to_cons_unchecked(left, eos_left);
    let cons_r = prim_to_cons_unchecked(right, eos_right);
    let star_l = star_state(left, &cons_l, s_l, s_star);
    let star_r = star_state(right, &cons_r, s_r, s_star);

    let (flux0, u_star0) = if s_l >= 0.0 {
        (physical_flux(left, eos_left), cons_l)
    } else if s_star >= 0.0 {
        (jump_flux(physical_flux(left, eos_left), s_l, &star_l, &cons_l), star_l)
    } else if s_r > 0.0 {
        (jump_flux(physical_flux(right, eos_right), s_r, &star_r, &cons_r), star_r)
    } else {
        (physical_flux(right, eos_right), cons_r)
    };

    Ok(RiemannFan {
        flux0,
        sigma: s_star,
        p_star,
        u_star0,
        s_left: s_l,
        s_right: s_r,
        star_left: star_l,
        star_right: star_r,
    })
}

fn star_state(v: &Primitive, c: &Conserved, s: f64, s_star: f64) -> Conserved {
    let factor = v.rho * (s - v.u) / (s - s_star);
    let energy = c.energy / v.rho + (s_star - v.u) * (s_star + v.p / (v.rho * (s - v.u)));
    Conserved::new(factor, factor * s_star, factor * energy)
}

/// Rankine-Hugoniot across the outer wave: `F* = F + s (U* - U)`.
fn jump_flux(f: [f64; 3], s: f64, star: &Conserved, c: &Conserved) -> [f64; 3] {
    [
        f[0] + s * (star.mass - c.mass),
        f[1] + s * (star.momentum - c.momentum),
        f[2] + s * (star.energy - c.energy),
    ]
}

/// Flux through a surface moving with the contact, `p* [0, 1, sigma]`.
///
/// This is `F - sigma U` evaluated in the star region, identical on both
/// sides of the contact since they share `p*` and `sigma`.
pub fn lagrangian_flux(fan: &RiemannFan) -> [f64; 3] {
    [0.0, fan.p_star, fan.p_star * fan.sigma]
}
