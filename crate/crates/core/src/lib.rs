//! Dissipative dynamics and entanglement analysis for two radiatively coupled
//! three-level atoms in the V configuration.
//!
//! Each atom has excited levels `|1>`, `|2>` and ground level `|3>`. The
//! two-atom state lives on a 9-dimensional space with composite index
//! `k = 3(i - 1) + j` for `|i_A> (x) |j_B>`.
//!
//! - [`matkit`]: small dense complex linear algebra.
//! - [`qstate`]: density matrices, partial trace/transpose, realignment.
//! - [`states`]: the initial-state catalog.
//! - [`entanglement`]: PPT, realignment and reduction criteria.
//! - [`dynamics`]: couplings, generator, integrator, event detection.
//! - [`asymptotics`]: closed-form stationary states at zero separation.

pub mod asymptotics;
pub mod dynamics;
pub mod entanglement;
pub mod matkit;
pub mod qstate;
pub mod states;

pub use matkit::CMatrix;
pub use qstate::{DensityMatrix, Subsystem};
