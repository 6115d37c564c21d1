use crate::error::{DemError, Result};
use crate::state::Primitive;

/// Linearized (acoustic) contact speed and pressure, split into the part
/// symmetric under exchange of the two states and the antisymmetric rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfacialQuantities {
    pub sigma: f64,
    pub p_star: f64,
    pub sigma_symmetric: f64,
    pub sigma_antisymmetric: f64,
    pub p_symmetric: f64,
    pub p_antisymmetric: f64,
}

pub fn interfacial_decomposition(left: &Primitive, right: &Primitive, z_left: f64, z_right: f64) -> Result<InterfacialQuantities> {
    let z = z_left + z_right;
    if !(z > 0.0) || !z.is_finite() {
        return Err(DemError::DegenerateImpedance { d: z });
    }
    let sigma_symmetric = (z_left * left.u + z_right * right.u) / z;
    let sigma_antisymmetric = -(right.p - left.p) / z;
    let p_symmetric = (z_right * left.p + z_left * right.p) / z;
    let p_antisymmetric = -z_left * z_right * (right.u - left.u) / z;
    Ok(InterfacialQuantities {
        sigma: sigma_symmetric + sigma_antisymmetric,
        p_star: p_symmetric + p_antisymmetric,
        sigma_symmetric,
        sigma_antisymmetric,
        p_symmetric,
        p_antisymmetric,
    })
}
