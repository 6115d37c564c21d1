//! Interface probability coefficients.
//!
//! At the interface between cells `i` and `i+1`, `P[p,q]` is the probability
//! of finding phase `p` on the left and phase `q` on the right. The stratified
//! pair keeps phases connected across the interface, the disperse pair keeps
//! them apart, and the one-parameter family interpolates linearly between the
//! two with `r` in `[0, 1]`.

use crate::error::{DemError, Result};

/// Volume fractions of one phase in the cells left and right of an interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaPair {
    pub alpha_left: f64,
    pub alpha_right: f64,
}

impl AlphaPair {
    pub fn new(alpha_left: f64, alpha_right: f64) -> Result<Self> {
        for alpha in [alpha_left, alpha_right] {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(DemError::VolumeFraction { alpha });
            }
        }
        Ok(Self { alpha_left, alpha_right })
    }

    /// The same interface seen from the other phase.
    pub fn complement(self) -> Self {
        Self { alpha_left: 1.0 - self.alpha_left, alpha_right: 1.0 - self.alpha_right }
    }
}

/// The four interface probabilities from the viewpoint of phase `k`, with
/// `l` the other phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityQuad {
    pub p_kk: f64,
    /// Phase k on the left, phase l on the right.
    pub p_kl: f64,
    pub p_lk: f64,
    pub p_ll: f64,
    pub r: f64,
}

impl ProbabilityQuad {
    /// The quad seen from the other phase.
    pub fn swapped(self) -> Self {
        Self { p_kk: self.p_ll, p_kl: self.p_lk, p_lk: self.p_kl, p_ll: self.p_kk, r: self.r }
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Stratified pair `(P[k,k], P[k,l]) = (min(a_i, a_i+1), max(a_i - a_i+1, 0))`.
pub fn stratified_pair(a: AlphaPair) -> (f64, f64) {
    (a.alpha_left.min(a.alpha_right), pos(a.alpha_left - a.alpha_right))
}

/// Disperse pair `(max(a_i - b_i+1, 0), min(a_i, b_i+1))` where `b = 1 - a` is
/// the other phase.
pub fn disperse_pair(a: AlphaPair) -> (f64, f64) {
    let other_right = 1.0 - a.alpha_right;
    (pos(a.alpha_left - other_right), a.alpha_left.min(other_right))
}

fn blend(r: f64, disperse: (f64, f64), stratified: (f64, f64)) -> (f64, f64) {
    (
        r * disperse.0 + (1.0 - r) * stratified.0,
        r * disperse.1 + (1.0 - r) * stratified.1,
    )
}

/// Convex combination `r P1 + (1 - r) P0`, evaluated from each phase's viewpoint.
pub fn convex_quad(a: AlphaPair, r: f64) -> Result<ProbabilityQuad> {
    if !(0.0..=1.0).contains(&r) {
        return Err(DemError::RegimeOutOfRange { r });
    }
    Ok(convex_quad_unchecked(a, r))
}

#[inline]
pub fn convex_quad_unchecked(a: AlphaPair, r: f64) -> ProbabilityQuad {
    let (p_kk, p_kl) = blend(r, disperse_pair(a), stratified_pair(a));
    let b = a.complement();
    let (p_ll, p_lk) = blend(r, disperse_pair(b), stratified_pair(b));
    ProbabilityQuad { p_kk, p_kl, p_lk, p_ll, r }
}

/// Recovers the regime parameter from a consistent quad. Returns 0 when the
/// stratified and disperse pairs coincide.
pub fn extract_r(quad: &ProbabilityQuad, a: AlphaPair) -> f64 {
    let (_, s) = stratified_pair(a);
    let (_, d) = disperse_pair(a);
    let den = d - s;
    if den == 0.0 {
        return 0.0;
    }
    ((quad.p_kl - s) / den).clamp(0.0, 1.0)
}

/// Same as [`extract_r`], computed from the diagonal entry instead.
pub fn extract_r_diagonal(quad: &ProbabilityQuad, a: AlphaPair) -> f64 {
    let (s, _) = stratified_pair(a);
    let (d, _) = disperse_pair(a);
    let den = d - s;
    if den == 0.0 {
        return 0.0;
    }
    ((quad.p_kk - s) / den).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `P[k,k] + P[k,l] = a_i`
    LeftMarginal,
    /// `P[k,k] + P[l,k] = a_i+1`
    RightMarginal,
    /// `P[l,l] + P[l,k] = 1 - a_i`
    LeftMarginalOther,
    /// `P[l,l] + P[k,l] = 1 - a_i+1`
    RightMarginalOther,
    SumToOne,
    /// `P[p,p]` between `max(a_i^p - a_i+1^q, 0)` and `min(a_i^p, a_i+1^p)`
    DiagonalBounds,
    /// `P[p,q]` between `max(a_i^p - a_i+1^p, 0)` and `min(a_i^p, a_i+1^q)`
    CrossBounds,
    UnitInterval,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    /// Amount by which the condition fails.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConsistencyReport {
    pub violations: Vec<Violation>,
    /// Largest defect among the equality conditions.
    pub max_equality_defect: f64,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates every marginal identity and bound, flagging any that fail by more than `tol`.
pub fn check_consistency(quad: &ProbabilityQuad, a: AlphaPair, tol: f64) -> ConsistencyReport {
    let mut report = ConsistencyReport::default();
    let b = a.complement();
    let q = quad;
    let eq = |condition, lhs: f64, rhs: f64, report: &mut ConsistencyReport| {
        let defect = (lhs - rhs).abs();
        report.max_equality_defect = report.max_equality_defect.max(defect);
        if defect > tol {
            report.violations.push(Violation { condition, slack: defect });
        }
    };
    eq(Condition::LeftMarginal, q.p_kk + q.p_kl, a.alpha_left, &mut report);
    eq(Condition::RightMarginal, q.p_kk + q.p_lk, a.alpha_right, &mut report);
    eq(Condition::LeftMarginalOther, q.p_ll + q.p_lk, b.alpha_left, &mut report);
    eq(Condition::RightMarginalOther, q.p_ll + q.p_kl, b.alpha_right, &mut report);
    eq(Condition::SumToOne, q.p_kk + q.p_kl + q.p_lk + q.p_ll, 1.0, &mut report);

    let mut within = |condition, x: f64, lo: f64, hi: f64| {
        let slack = (lo - x).max(x - hi);
        if slack > tol {
            report.violations.push(Violation { condition, slack });
        }
    };
    // (own, other) fractions for phase p = k and p = l
    for (own, other, pp, pq) in [(a, b, q.p_kk, q.p_kl), (b, a, q.p_ll, q.p_lk)] {
        within(
            Condition::DiagonalBounds,
            pp,
            pos(own.alpha_left - other.alpha_right),
            own.alpha_left.min(own.alpha_right),
        );
        within(
            Condition::CrossBounds,
            pq,
            pos(own.alpha_left - own.alpha_right),
            own.alpha_left.min(other.alpha_right),
        );
    }
    for x in [q.p_kk, q.p_kl, q.p_lk, q.p_ll] {
        within(Condition::UnitInterval, x, 0.0, 1.0);
    }
    report
}
