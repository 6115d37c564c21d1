//! The regime field `r` on cell interfaces and its update policies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DemError, Result};

/// Identifier of the pseudo-random generator, recorded in output metadata.
pub const RNG_ID: &str = "chacha8/rand_chacha-0.3";

#[derive(Debug, Clone, PartialEq)]
pub enum RegimePolicy {
    Constant(f64),
    /// `values[j]` applies on `[breakpoints[j-1], breakpoints[j])`; there is one
    /// more value than breakpoints.
    Piecewise { values: Vec<f64>, breakpoints: Vec<f64> },
    /// Random walk `r <- clamp(r + epsilon q)` with `q` uniform on `[-1, 1)`,
    /// started from a constant `r0`.
    Stochastic { r0: f64, epsilon: f64 },
    /// Fresh uniform `r` on `[0, 1)` at every interface and step.
    Random,
}

impl RegimePolicy {
    /// The four-piece function used for the piecewise-regime experiment.
    pub fn reference_piecewise() -> Self {
        RegimePolicy::Piecewise {
            values: vec![0.13, 0.47, 1.0, 0.69],
            breakpoints: vec![-0.52, 0.395, 0.761],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |r: f64| {
            if (0.0..=1.0).contains(&r) { Ok(()) } else { Err(DemError::RegimeOutOfRange { r }) }
        };
        match self {
            RegimePolicy::Constant(r) => check(*r),
            RegimePolicy::Piecewise { values, breakpoints } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(DemError::InvalidGrid(format!(
                        "piecewise regime needs one more value than breakpoints, got {} and {}",
                        values.len(),
                        breakpoints.len()
                    )));
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(DemError::InvalidGrid("piecewise breakpoints must increase".into()));
                }
                values.iter().try_for_each(|&r| check(r))
            }
            RegimePolicy::Stochastic { r0, epsilon } => {
                check(*r0)?;
                if !(*epsilon >= 0.0 && epsilon.is_finite()) {
                    return Err(DemError::InvalidGrid(format!("stochastic step must be >= 0, got {epsilon}")));
                }
                Ok(())
            }
            RegimePolicy::Random => Ok(()),
        }
    }

    /// Evaluates a deterministic policy at position `x`.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        match self {
            RegimePolicy::Constant(r) => Some(*r),
            RegimePolicy::Piecewise { values, breakpoints } => {
                let j = breakpoints.iter().take_while(|&&b| x >= b).count();
                Some(values[j])
            }
            RegimePolicy::Stochastic { r0, .. } => Some(*r0),
            RegimePolicy::Random => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RegimePolicy::Constant(r) => format!("constant {r}"),
            RegimePolicy::Piecewise { values, breakpoints } => {
                let mut s = format!("piecewise {}", values[0]);
                for (b, v) in breakpoints.iter().zip(&values[1..]) {
                    s.push_str(&format!(" {b} {v}"));
                }
                s
            }
            RegimePolicy::Stochastic { r0, epsilon } => format!("stochastic {r0} {epsilon}"),
            RegimePolicy::Random => "random".to_string(),
        }
    }
}

/// Regime values on the `n_cells + 1` interfaces of a grid, including the two
/// domain boundaries.
#[derive(Debug, Clone)]
pub struct RegimeField {
    pub values: Vec<f64>,
    pub policy: RegimePolicy,
    pub seed: u64,
    rng: ChaCha8Rng,
}

impl PartialEq for RegimeField {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.policy == other.policy && self.seed == other.seed
    }
}

impl RegimeField {
    pub fn new(policy: RegimePolicy, x_min: f64, x_max: f64, n_cells: usize, seed: u64) -> Result<Self> {
        init_field(policy, x_min, x_max, n_cells, seed)
    }

    pub fn constant(r: f64, n_cells: usize) -> Result<Self> {
        init_field(RegimePolicy::Constant(r), 0.0, 1.0, n_cells, 0)
    }

    pub fn n_interfaces(&self) -> usize {
        self.values.len()
    }

    /// Advances the field by one time step according to its policy.
    pub fn update(&mut self) {
        stochastic_update(self);
    }
}

/// Samples the policy at the interface positions `x_min + j dx`.
pub fn init_field(policy: RegimePolicy, x_min: f64, x_max: f64, n_cells: usize, seed: u64) -> Result<RegimeField> {
    policy.validate()?;
    if let RegimePolicy::Piecewise { breakpoints, .. } = &policy {
        if let Some(&x) = breakpoints.iter().find(|&&b| !(b > x_min && b < x_max)) {
            return Err(DemError::BreakpointOutsideDomain { x, x_min, x_max });
        }
    }
    let dx = (x_max - x_min) / n_cells as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..=n_cells)
        .map(|j| match policy.value_at(x_min + j as f64 * dx) {
            Some(r) => r,
            None => rng.gen::<f64>(),
        })
        .collect();
    Ok(RegimeField { values, policy, seed, rng })
}

/// One update of a random policy, drawing interface by interface from the
/// field's own stream. Deterministic policies are left untouched.
pub fn stochastic_update(field: &mut RegimeField) {
    match field.policy {
        RegimePolicy::Stochastic { epsilon, .. } => {
            for r in field.values.iter_mut() {
                let q = 2.0 * field.rng.gen::<f64>() - 1.0;
                *r = (*r + epsilon * q).clamp(0.0, 1.0);
            }
        }
        RegimePolicy::Random => {
            for r in field.values.iter_mut() {
                *r = field.rng.gen::<f64>();
            }
        }
        RegimePolicy::Constant(_) | RegimePolicy::Piecewise { .. } => {}
    }
}
