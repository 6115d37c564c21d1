use thiserror::Error;

pub type Result<T> = std::result::Result<T, DemError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DemError {
    #[error("invalid stiffened-gas parameters: gamma={gamma}, pi_inf={pi_inf}")]
    InvalidEos { gamma: f64, pi_inf: f64 },

    #[error("inadmissible thermodynamic state: rho={rho}, p={p} ({reason})")]
    InadmissibleState { rho: f64, p: f64, reason: &'static str },

    #[error("inadmissible conserved state: mass={mass}, momentum={momentum}, energy={energy}")]
    InadmissibleConserved { mass: f64, momentum: f64, energy: f64 },

    #[error("volume fraction {alpha} outside (0, 1)")]
    VolumeFraction { alpha: f64 },

    #[error("saturation violated: alpha1 + alpha2 - 1 = {defect:e}")]
    Saturation { defect: f64 },

    #[error("HLLC wave speed estimates crossed: s_left={s_left}, s_right={s_right}")]
    WaveSpeedCrossing { s_left: f64, s_right: f64 },

    #[error("exact Riemann problem generates vacuum (pressure function positive at p={p_min})")]
    Vacuum { p_min: f64 },

    #[error("exact Riemann solver did not converge in {iterations} iterations (residual {residual:e})")]
    RiemannNoConvergence { iterations: usize, residual: f64 },

    #[error("regime parameter r={r} outside [0, 1]")]
    RegimeOutOfRange { r: f64 },

    #[error("regime breakpoint x={x} outside domain [{x_min}, {x_max}]")]
    BreakpointOutsideDomain { x: f64, x_min: f64, x_max: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite wave speed in cell {cell}")]
    NonFiniteWaveSpeed { cell: usize },

    #[error("relaxation Newton iteration failed to converge after {iterations} iterations")]
    NewtonNoConvergence { iterations: usize },

    #[error("relaxation Newton step could not be damped into the admissible region")]
    NewtonDampingFailed,

    #[error("singular relaxation Jacobian (det={det:e})")]
    SingularJacobian { det: f64 },

    #[error("degenerate impedance denominator d={d:e} in projection relaxation")]
    DegenerateImpedance { d: f64 },

    #[error("cell {cell}, phase {phase}: {source}")]
    Cell {
        cell: usize,
        phase: usize,
        #[source]
        source: Box<DemError>,
    },

    #[error("at t={t:e}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<DemError>,
    },
}

impl DemError {
    pub fn in_cell(self, cell: usize, phase: usize) -> Self {
        DemError::Cell { cell, phase, source: Box::new(self) }
    }

    pub fn at_time(self, t: f64) -> Self {
        DemError::AtTime { t, source: Box::new(self) }
    }
}
