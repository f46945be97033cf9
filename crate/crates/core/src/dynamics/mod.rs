//! Master-equation dynamics of two V-type atoms coupled through the common
//! vacuum: coupling models, the generator, a fixed-step RK4 integrator and
//! sign-change event detection.
//!
//! Time is measured in units of `1/gamma`.

mod couplings;
mod events;
mod generator;
mod integrate;

use thiserror::Error;

use crate::qstate::{DensityMatrix, StateError};

pub use couplings::{
    collective_damping, couplings, dipole_shift, CouplingModel, CouplingParams, DEFAULT_SMALL_R_OMEGA,
};
pub use events::sign_change_brackets;
pub use generator::{liouvillian, liouvillian_matrix, Generator};
pub use integrate::{
    evolve, integration_tolerances, Integrator, Trajectory, DEFAULT_DT, EVENT_SAMPLE_INTERVAL, EVENT_TIME_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid couplings: {0}")]
    BadCouplings(String),
    #[error("separation R/lambda = {0} must be positive")]
    BadGeometry(f64),
    #[error("state failed validation at t = {t}: {detail}")]
    StepTooLarge { t: f64, detail: String },
    #[error("event refinement stalled near t = {t}")]
    RefinementStall { t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Earliest refined sign change of `f` along `traj`, integrating with the
/// given couplings and step.
pub fn detect_sign_change(
    traj: &Trajectory,
    f: impl Fn(&DensityMatrix) -> f64,
    refine: &CouplingParams,
    dt: f64,
) -> Result<Option<f64>, DynamicsError> {
    Integrator::new(refine, dt)?.detect_sign_change(traj, f)
}
