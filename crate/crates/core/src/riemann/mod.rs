//! Riemann solvers between arbitrary phase pairings.
//!
//! [`hllc`] is the flux workhorse of the scheme. [`ExactRiemann`] solves the
//! two-material problem exactly and serves as an oracle. The acoustic
//! interfacial quantities live in [`interfacial_decomposition`].

mod acoustic;
mod exact;
mod hllc;

pub use acoustic::{interfacial_decomposition, InterfacialQuantities};
pub use exact::{exact_rp, ExactRiemann, Wave};
pub use hllc::{hllc, lagrangian_flux, RiemannFan};
