//! Scenario runner: named initial conditions and geometries, figure tables,
//! parameter sweeps, entanglement death/revival detection and export.

mod events;
mod figures;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use events::{detect_events, EntanglementEvents};
pub use figures::{figure, simulate_table, sweep, FigureOverrides, SweepAxis};
pub use table::{format_value, LabelledEvents, Table};

use crate::analytic::{build_mixed_initial, AnalyticError, MixedInitialSpec};
use crate::dynamics::{integrate, DynamicsError, IntegratorConfig, RhsChoice, Trajectory};
use crate::physics::{params_from_geometry, Geometry, PhysicsError, SystemParams};
use crate::state::{to_dicke, DickeState};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl ScenarioError {
    /// Bad input rather than a numerical failure.
    pub fn is_usage(&self) -> bool {
        match self {
            ScenarioError::Usage(_) | ScenarioError::Physics(_) | ScenarioError::Analytic(_) => true,
            ScenarioError::Dynamics(DynamicsError::Config(_) | DynamicsError::InitialState(_)) => true,
            ScenarioError::Dynamics(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialCondition {
    /// `ρ_ss = 1`.
    Symmetric,
    /// `ρ_ee = 1`.
    DoublyExcited,
    Mixed(MixedInitialSpec),
}

impl InitialCondition {
    pub fn label(&self) -> &'static str {
        match self {
            InitialCondition::Symmetric => "symmetric",
            InitialCondition::DoublyExcited => "excited",
            InitialCondition::Mixed(_) => "mixed",
        }
    }

    pub fn state(&self) -> Result<DickeState, ScenarioError> {
        Ok(match self {
            InitialCondition::Symmetric => DickeState::symmetric(),
            InitialCondition::DoublyExcited => DickeState::doubly_excited(),
            InitialCondition::Mixed(spec) => to_dicke(&build_mixed_initial(spec)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub initial: InitialCondition,
    pub geometry: Geometry,
    pub gamma: f64,
    /// In units of `1/γ`.
    pub t_max: f64,
    pub output_dt: f64,
    pub rhs_choice: RhsChoice,
    pub rel_tol: f64,
}

impl Default for ScenarioSpec {
    /// Symmetric state at `r₁₂ = λ/8`, `ξ = π/2`, random orientation, over `6/γ`.
    fn default() -> Self {
        Self {
            name: "scenario".into(),
            initial: InitialCondition::Symmetric,
            geometry: Geometry { r12_over_lambda: 0.125, xi: std::f64::consts::FRAC_PI_2, orientation: crate::physics::Orientation::Random },
            gamma: 1.0,
            t_max: 6.0,
            output_dt: 0.01,
            rhs_choice: RhsChoice::DickeEq11,
            rel_tol: IntegratorConfig::default().rel_tol,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.geometry.validate()?;
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(PhysicsError::NonPositive { name: "gamma", value: self.gamma }.into());
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(ScenarioError::Usage(format!("tmax must be positive, got {}", self.t_max)));
        }
        if !(self.output_dt.is_finite() && self.output_dt > 0.0) {
            return Err(ScenarioError::Usage(format!("dt-out must be positive, got {}", self.output_dt)));
        }
        if let InitialCondition::Mixed(spec) = &self.initial {
            spec.validate()?;
        }
        self.integrator_config().validate()?;
        Ok(())
    }

    pub fn params(&self) -> Result<SystemParams, ScenarioError> {
        Ok(params_from_geometry(&self.geometry, self.gamma, 0.0)?)
    }

    /// Times are in units of `1/γ`; the integrator works in absolute time.
    pub fn integrator_config(&self) -> IntegratorConfig {
        let base = IntegratorConfig::default();
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: base.abs_tol,
            max_step: base.max_step / self.gamma,
            t_max: self.t_max / self.gamma,
            output_dt: self.output_dt / self.gamma,
        }
    }
}

/// Integrates a scenario; sample times are returned in units of `1/γ`.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<Trajectory, ScenarioError> {
    spec.validate()?;
    let params = spec.params()?;
    let initial = spec.initial.state()?;
    let mut traj = integrate(&initial, &params, &spec.integrator_config(), spec.rhs_choice)?;
    if spec.gamma != 1.0 {
        for t in &mut traj.times {
            *t *= spec.gamma;
        }
    }
    Ok(traj)
}

/// Default threshold below which concurrence counts as dead.
pub const ZERO_THRESHOLD: f64 = tol::ZERO_THRESHOLD;
