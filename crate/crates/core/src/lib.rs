//! Discrete equation method (DEM) for one-dimensional, two-phase compressible flow.
//!
//! Each phase obeys its own Euler system closed by a stiffened-gas equation of
//! state. Interface fluxes are ensemble averages over the four possible phase
//! pairings at a cell face, weighted by probability coefficients that
//! interpolate between a stratified (`r = 0`) and a disperse (`r = 1`) regime.
//! Infinite-drag pressure/velocity relaxation is applied per cell after each
//! hyperbolic step.
//!
//! Module map:
//!
//! * [`eos`] stiffened-gas thermodynamics
//! * [`state`] primitive/conserved containers and mixture diagnostics
//! * [`riemann`] HLLC, exact and acoustic Riemann solvers
//! * [`probability`] interface probability coefficients
//! * [`scheme`] spatial operator, time step, boundary treatment and driver
//! * [`relaxation`] equilibrium projection of a two-phase cell
//! * [`regime`] the per-interface regime parameter field

pub mod eos;
pub mod error;
pub mod probability;
pub mod regime;
pub mod relaxation;
pub mod riemann;
pub mod scheme;
pub mod state;

pub use eos::EosParams;
pub use error::{DemError, Result};
pub use probability::{AlphaPair, ProbabilityQuad};
pub use regime::{RegimeField, RegimePolicy};
pub use relaxation::RelaxationMode;
pub use riemann::RiemannFan;
pub use scheme::{Grid1D, PhaseInit, RunConfig, Simulation, Snapshot};
pub use state::{Conserved, MixtureCell, PhaseCellState, Primitive};
