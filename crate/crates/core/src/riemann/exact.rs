use crate::eos::EosParams;
use crate::error::{DemError, Result};
use crate::state::Primitive;

const TOL: f64 = 1e-10;
const MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    Shock,
    Rarefaction,
}

/// Exact solution of a two-material Riemann problem between stiffened gases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRiemann {
    pub left: Primitive,
    pub right: Primitive,
    pub eos_left: EosParams,
    pub eos_right: EosParams,
    pub p_star: f64,
    pub u_star: f64,
    /// `|f_L + f_R + u_R - u_L|` relative to the velocity scale of the problem.
    pub residual: f64,
    pub iterations: usize,
}

/// Shock or rarefaction branch of the pressure function for one side, with its derivative.
fn branch(p: f64, v: &Primitive, eos: &EosParams) -> (f64, f64) {
    let (g, pi) = (eos.gamma, eos.pi_inf);
    if p > v.p {
        let a = 2.0 / ((g + 1.0) * v.rho);
        let b = (g - 1.0) / (g + 1.0) * (v.p + pi);
        let q = (a / (p + pi + b)).sqrt();
        (
            (p - v.p) * q,
            q * (1.0 - 0.5 * (p - v.p) / (p + pi + b)),
        )
    } else {
        let c = eos.sound_speed_unchecked(v.rho, v.p);
        let ratio = (p + pi) / (v.p + pi);
        (
            2.0 * c / (g - 1.0) * (ratio.powf((g - 1.0) / (2.0 * g)) - 1.0),
            ratio.powf(-(g + 1.0) / (2.0 * g)) / (v.rho * c),
        )
    }
}

/// Solves the Riemann problem exactly: safeguarded Newton iteration on the
/// pressure function, started from the two-rarefaction estimate.
pub fn exact_rp(left: &Primitive, right: &Primitive, eos_left: &EosParams, eos_right: &EosParams) -> Result<ExactRiemann> {
    eos_left.check_admissible(left.rho, left.p)?;
    eos_right.check_admissible(right.rho, right.p)?;
    let a_l = eos_left.sound_speed_unchecked(left.rho, left.p);
    let a_r = eos_right.sound_speed_unchecked(right.rho, right.p);
    let du = right.u - left.u;
    let vscale = a_l + a_r + left.u.abs() + right.u.abs();
    let g = |p: f64| {
        let (fl, dl) = branch(p, left, eos_left);
        let (fr, dr) = branch(p, right, eos_right);
        (fl + fr + du, dl + dr)
    };

    // admissible pressures satisfy p + pi > 0 on both sides
    let p_floor = -eos_left.pi_inf.min(eos_right.pi_inf);
    let pscale = left.p.abs().max(right.p.abs()) + eos_left.pi_inf.max(eos_right.pi_inf);
    let (g_floor, _) = g(p_floor);
    if g_floor >= 0.0 {
        return Err(DemError::Vacuum { p_min: p_floor });
    }
    let mut lo = p_floor;
    let mut hi = left.p.max(right.p);
    while g(hi).0 < 0.0 {
        hi = 2.0 * hi.abs() + pscale;
    }

    let mut p = two_rarefaction_guess(left, right, eos_left, eos_right, a_l, a_r).clamp(lo, hi);
    if !(p > lo) {
        p = 0.5 * (lo + hi);
    }
    let mut iterations = 0;
    let mut val = g(p);
    while iterations < MAX_ITER {
        iterations += 1;
        if val.0.abs() <= 1e-14 * vscale {
            break;
        }
        if val.0 < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let newton = p - val.0 / val.1;
        let next = if newton > lo && newton < hi && newton.is_finite() { newton } else { 0.5 * (lo + hi) };
        let step = (next - p).abs();
        p = next;
        val = g(p);
        if step <= 1e-15 * (p.abs() + pscale) {
            break;
        }
    }
    let residual = val.0.abs() / vscale;
    if !(residual < TOL) {
        return Err(DemError::RiemannNoConvergence { iterations, residual });
    }
    let (fl, _) = branch(p, left, eos_left);
    let (fr, _) = branch(p, right, eos_right);
    Ok(ExactRiemann {
        left: *left,
        right: *right,
        eos_left: *eos_left,
        eos_right: *eos_right,
        p_star: p,
        u_star: 0.5 * (left.u + right.u) + 0.5 * (fr - fl),
        residual,
        iterations,
    })
}

/// Two-rarefaction approximation, using a common exponent when the two EOS differ.
fn two_rarefaction_guess(l: &Primitive, r: &Primitive, el: &EosParams, er: &EosParams, a_l: f64, a_r: f64) -> f64 {
    let g = 0.5 * (el.gamma + er.gamma);
    let z = (g - 1.0) / (2.0 * g);
    let pl = l.p + el.pi_inf;
    let pr = r.p + er.pi_inf;
    let num = a_l + a_r - 0.5 * (g - 1.0) * (r.u - l.u);
    let den = a_l / pl.powf(z) + a_r / pr.powf(z);
    let pbar = (num / den).powf(1.0 / z);
    // the guess is in "p + pi" units; shift back with the mean reference pressure
    pbar - 0.5 * (el.pi_inf + er.pi_inf)
}

impl ExactRiemann {
    pub fn left_wave(&self) -> Wave {
        if self.p_star > self.left.p { Wave::Shock } else { Wave::Rarefaction }
    }

    pub fn right_wave(&self) -> Wave {
        if self.p_star > self.right.p { Wave::Shock } else { Wave::Rarefaction }
    }

    /// Density behind the wave on one side.
    pub fn star_density(&self, left_side: bool) -> f64 {
        let (v, eos) = if left_side { (&self.left, &self.eos_left) } else { (&self.right, &self.eos_right) };
        let (g, pi) = (eos.gamma, eos.pi_inf);
        let ratio = (self.p_star + pi) / (v.p + pi);
        if self.p_star > v.p {
            let m = (g - 1.0) / (g + 1.0);
            v.rho * (ratio + m) / (m * ratio + 1.0)
        } else {
            v.rho * ratio.powf(1.0 / g)
        }
    }

    /// Speed of the shock on one side, if that wave is a shock.
    pub fn shock_speed(&self, left_side: bool) -> Option<f64> {
        let (v, eos, sign) = if left_side {
            (&self.left, &self.eos_left, -1.0)
        } else {
            (&self.right, &self.eos_right, 1.0)
        };
        if self.p_star <= v.p {
            return None;
        }
        let (g, pi) = (eos.gamma, eos.pi_inf);
        let a = eos.sound_speed_unchecked(v.rho, v.p);
        let ratio = (self.p_star + pi) / (v.p + pi);
        Some(v.u + sign * a * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt())
    }

    /// Solution at `xi = x / t`.
    pub fn sample(&self, xi: f64) -> Primitive {
        self.sample_with_side(xi).0
    }

    /// Solution at `xi = x / t` and whether it belongs to the left material.
    pub fn sample_with_side(&self, xi: f64) -> (Primitive, bool) {
        let left_side = xi <= self.u_star;
        let (v, eos, sign) = if left_side {
            (&self.left, &self.eos_left, -1.0)
        } else {
            (&self.right, &self.eos_right, 1.0)
        };
        let (g, pi) = (eos.gamma, eos.pi_inf);
        let a = eos.sound_speed_unchecked(v.rho, v.p);
        let star = Primitive::new(self.star_density(left_side), self.u_star, self.p_star);

        // orient so that "ahead" means toward the undisturbed state
        let ahead = |s: f64| if left_side { xi < s } else { xi > s };
        let out = if let Some(s) = self.shock_speed(left_side) {
            if ahead(s) { *v } else { star }
        } else {
            let head = v.u + sign * a;
            let a_star = eos.sound_speed_unchecked(star.rho, star.p);
            let tail = self.u_star + sign * a_star;
            if ahead(head) {
                *v
            } else if !ahead(tail) {
                star
            } else {
                let c = 2.0 / (g + 1.0);
                let u = c * (-sign * a + 0.5 * (g - 1.0) * v.u + xi);
                let af = c * (a - sign * 0.5 * (g - 1.0) * (v.u - xi));
                let ratio = af / a;
                Primitive::new(
                    v.rho * ratio.powf(2.0 / (g - 1.0)),
                    u,
                    (v.p + pi) * ratio.powf(2.0 * g / (g - 1.0)) - pi,
                )
            }
        };
        (out, left_side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{physical_flux, prim_to_cons};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn sod_reference_values() {
        // classical Sod problem, star values from standard tables
        let g = EosParams::air();
        let ex = exact_rp(&Primitive::new(1.0, 0.0, 1.0), &Primitive::new(0.125, 0.0, 0.1), &g, &g).unwrap();
        assert_relative_eq!(ex.p_star, 0.30313, max_relative = 1e-4);
        assert_relative_eq!(ex.u_star, 0.92745, max_relative = 1e-4);
        assert_relative_eq!(ex.star_density(true), 0.42632, max_relative = 1e-4);
        assert_relative_eq!(ex.star_density(false), 0.26557, max_relative = 1e-4);
        assert_eq!(ex.left_wave(), Wave::Rarefaction);
        assert_eq!(ex.right_wave(), Wave::Shock);
    }

    #[test]
    fn equal_states_are_preserved() {
        let w = EosParams::water();
        let v = Primitive::new(1000.0, 3.0, 1e5);
        let ex = exact_rp(&v, &v, &w, &w).unwrap();
        for xi in [-5000.0, -1.0, 0.0, 3.0, 10.0, 5000.0] {
            let s = ex.sample(xi);
            assert_relative_eq!(s.rho, 1000.0, max_relative = 1e-12);
            assert_relative_eq!(s.u, 3.0, max_relative = 1e-9);
            assert_relative_eq!(s.p, 1e5, max_relative = 1e-6);
        }
    }

    fn rh_residual(a: &Primitive, b: &Primitive, s: f64, eos: &EosParams) -> f64 {
        let ua = prim_to_cons(a, eos).unwrap().to_array();
        let ub = prim_to_cons(b, eos).unwrap().to_array();
        let fa = physical_flux(a, eos);
        let fb = physical_flux(b, eos);
        (0..3)
            .map(|k| {
                let scale = fa[k].abs().max(fb[k].abs()).max((s * ua[k]).abs()).max((s * ub[k]).abs());
                ((fb[k] - fa[k]) - s * (ub[k] - ua[k])).abs() / scale
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn sod_shock_satisfies_rankine_hugoniot() {
        let g = EosParams::air();
        let ex = exact_rp(&Primitive::new(1.0, 0.0, 1.0), &Primitive::new(0.125, 0.0, 0.1), &g, &g).unwrap();
        let s = ex.shock_speed(false).unwrap();
        let behind = ex.sample(s - 1e-9);
        let ahead = ex.sample(s + 1e-9);
        assert!(rh_residual(&behind, &ahead, s, &g) < 1e-8);
    }

    #[test]
    fn gas_liquid_problem() {
        let (g, w) = (EosParams::air(), EosParams::water());
        let ex = exact_rp(&Primitive::new(50.0, 0.0, 1e9), &Primitive::new(1000.0, 0.0, 1e5), &g, &w).unwrap();
        assert!(ex.residual < 1e-10);
        assert!(ex.u_star > 0.0 && ex.p_star > 1e5 && ex.p_star < 1e9);
        let s = ex.shock_speed(false).unwrap();
        let behind = ex.sample(s - 1e-6);
        assert!(!ex.sample_with_side(s - 1e-6).1);
        assert!(rh_residual(&behind, &ex.right, s, &w) < 1e-8);
    }

    #[test]
    fn strong_expansion_reports_vacuum() {
        let g = EosParams::air();
        let err = exact_rp(&Primitive::new(1.0, -20.0, 0.4), &Primitive::new(1.0, 20.0, 0.4), &g, &g).unwrap_err();
        assert!(matches!(err, DemError::Vacuum { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(3_000))]

        #[test]
        fn residual_and_admissibility(
            rl in 1.0f64..1500.0, rr in 1.0f64..1500.0,
            ul in -50.0f64..50.0, ur in -50.0f64..50.0,
            pl in 1e4f64..1e9, pr in 1e4f64..1e9,
            liq_l in any::<bool>(), liq_r in any::<bool>(),
        ) {
            let el = if liq_l { EosParams::water() } else { EosParams::air() };
            let er = if liq_r { EosParams::water() } else { EosParams::air() };
            let l = Primitive::new(rl, ul, pl);
            let r = Primitive::new(rr, ur, pr);
            let ex = match exact_rp(&l, &r, &el, &er) {
                Ok(ex) => ex,
                Err(DemError::Vacuum { .. }) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!(ex.residual < 1e-10);
            let smax = 2.0 * (el.sound_speed_unchecked(rl, pl) + er.sound_speed_unchecked(rr, pr) + 100.0);
            for i in 0..=200 {
                let xi = -smax + 2.0 * smax * i as f64 / 200.0;
                let (s, left) = ex.sample_with_side(xi);
                let eos = if left { el } else { er };
                prop_assert!(eos.check_admissible(s.rho, s.p).is_ok(), "xi={} state={:?}", xi, s);
            }
        }
    }
}
