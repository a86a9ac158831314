//! Dissipative dynamics and concurrence of two dipole-coupled two-level atoms
//! sharing a vacuum, in the timed Dicke basis.
//!
//! The crate is layered bottom-up:
//!
//! * [`complexmat`]: 4×4 complex matrices and eigenvalues.
//! * [`physics`]: couplings, excitation phase and level shift from geometry.
//! * [`state`]: density matrices in the product and timed Dicke bases.
//! * [`dynamics`]: equations of motion (two independent constructions) and
//!   an adaptive integrator.
//! * [`entanglement`]: Wootters concurrence, general and closed-form.
//! * [`analytic`]: closed-form concurrence solutions.
//! * [`scenarios`]: figure tables, sweeps, event detection and export.
//! * [`selftest`]: the conformance catalog tying the oracle pairs together.

pub mod analytic;
pub mod complexmat;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod physics;
pub mod sampling;
pub mod scenarios;
pub mod selftest;
pub mod state;
pub mod tol;

pub use complexmat::{Complex, ComplexMatrix4};
pub use dynamics::{integrate, IntegratorConfig, RhsChoice, Trajectory};
pub use entanglement::ConcurrenceBreakdown;
pub use error::Error;
pub use physics::{Geometry, Orientation, SystemParams};
pub use state::{BareState, DickeState};
