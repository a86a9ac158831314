use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::complexmat::LinalgError;
use crate::dynamics::DynamicsError;
use crate::entanglement::EntanglementError;
use crate::physics::PhysicsError;
use crate::scenarios::ScenarioError;
use crate::state::StateError;

/// Any failure surfaced by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}
