//! Time evolution of the two-atom density matrix.

mod integrator;
mod rhs;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use integrator::{integrate_sampled, IntegrationError, Stats, StepControl};
pub use rhs::{bare_liouvillian_rhs, dicke_rhs, dicke_rhs_with, lowering_operators, BareLiouvillian, Transcription};

use crate::complexmat::ComplexMatrix4;
use crate::entanglement::{self, EntanglementError};
use crate::physics::SystemParams;
use crate::state::{from_dicke, to_dicke, BareState, DickeState, Invariant, InvariantDefects, StateError, A, E, G, S};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error("invalid initial state: {0}")]
    InitialState(StateError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error("{invariant} violated at t = {time} (measured {measured:.3e}, allowed {allowed:.3e})")]
    InvariantViolation { invariant: Invariant, time: f64, measured: f64, allowed: f64 },
    #[error("concurrence failed at t = {time}: {source}")]
    Concurrence { time: f64, source: EntanglementError },
}

/// Which equation-of-motion construction drives [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RhsChoice {
    /// Element equations in the timed Dicke basis.
    #[default]
    DickeEq11,
    /// Element equations with the `ρ_ea` coefficient exactly as printed.
    /// Positivity is not guaranteed for states with `|e⟩`-one-excitation coherence.
    DickeEq11AsPublished,
    /// Operator-built Liouvillian in the product basis.
    BareEq1,
}

impl RhsChoice {
    pub fn label(&self) -> &'static str {
        match self {
            RhsChoice::DickeEq11 => "eq11",
            RhsChoice::DickeEq11AsPublished => "eq11-as-published",
            RhsChoice::BareEq1 => "eq1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step, in units of `1/γ`.
    pub max_step: f64,
    pub t_max: f64,
    pub output_dt: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-12, max_step: 0.01, t_max: 6.0, output_dt: 0.01 }
    }
}

impl IntegratorConfig {
    pub fn with_window(t_max: f64, output_dt: f64) -> Self {
        Self { t_max, output_dt, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("t_max", self.t_max),
            ("output_dt", self.output_dt),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(DynamicsError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.output_dt > self.t_max {
            return Err(DynamicsError::Config(format!(
                "output_dt = {} exceeds t_max = {}",
                self.output_dt, self.t_max
            )));
        }
        Ok(())
    }

    /// Samples at `k·output_dt` up to and including `t_max` (up to round-off).
    pub fn sample_count(&self) -> usize {
        (self.t_max / self.output_dt + 1e-9).floor() as usize + 1
    }
}

/// Scalars recorded at each sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub rho_ee: f64,
    pub rho_ss: f64,
    pub rho_aa: f64,
    pub rho_gg: f64,
    pub re_rho_as: f64,
    pub im_rho_as: f64,
    pub abs_rho_eg: f64,
    pub concurrence: f64,
}

impl Observables {
    pub fn of(state: &DickeState) -> Result<Self, EntanglementError> {
        let z = state.element(A, S);
        Ok(Self {
            rho_ee: state.population(E),
            rho_ss: state.population(S),
            rho_aa: state.population(A),
            rho_gg: state.population(G),
            re_rho_as: z.re,
            im_rho_as: z.im,
            abs_rho_eg: state.element(E, G).norm(),
            concurrence: entanglement::concurrence(state)?.c,
        })
    }

    pub const COLUMNS: [&'static str; 8] =
        ["rho_ee", "rho_ss", "rho_aa", "rho_gg", "re_rho_as", "im_rho_as", "abs_rho_eg", "concurrence"];

    pub fn values(&self) -> [f64; 8] {
        [
            self.rho_ee,
            self.rho_ss,
            self.rho_aa,
            self.rho_gg,
            self.re_rho_as,
            self.im_rho_as,
            self.abs_rho_eg,
            self.concurrence,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DickeState>,
    pub derived: Vec<Observables>,
    /// Worst invariant defects over all samples.
    pub defects: InvariantDefects,
    pub stats: Stats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn concurrence(&self) -> Vec<f64> {
        self.derived.iter().map(|o| o.concurrence).collect()
    }

    pub fn output_dt(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }
}

/// `(Γ+, Γ-)`, the decay rates of `|s⟩` and `|a⟩`.
pub fn decay_rates(params: &SystemParams) -> (f64, f64) {
    params.decay_rates()
}

pub fn integrate(
    initial: &DickeState,
    params: &SystemParams,
    cfg: &IntegratorConfig,
    rhs_choice: RhsChoice,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    initial
        .defects()
        .and_then(|d| d.check(1.0))
        .map_err(DynamicsError::InitialState)?;

    let n = cfg.sample_count();
    let ctl = StepControl { rel_tol: cfg.rel_tol, abs_tol: cfg.abs_tol, max_step: cfg.max_step };
    let mut traj = Trajectory {
        times: Vec::with_capacity(n),
        states: Vec::with_capacity(n),
        derived: Vec::with_capacity(n),
        defects: InvariantDefects::ideal(),
        stats: Stats::default(),
    };

    let mut record = |_: usize, t: f64, rho: &ComplexMatrix4, in_dicke: bool| -> Result<(), DynamicsError> {
        let state = if in_dicke {
            DickeState::new_unchecked(*rho)
        } else {
            to_dicke(&BareState::new_unchecked(*rho))
        };
        let defects = state.defects().map_err(|e| match e {
            StateError::Violation { invariant, measured, allowed } => {
                DynamicsError::InvariantViolation { invariant, time: t, measured, allowed }
            }
            StateError::Linalg(_) => DynamicsError::InvariantViolation {
                invariant: Invariant::Finite,
                time: t,
                measured: f64::NAN,
                allowed: 0.0,
            },
        })?;
        if let Err(StateError::Violation { invariant, measured, allowed }) = defects.check(tol::INTEGRATION_SLACK) {
            return Err(DynamicsError::InvariantViolation { invariant, time: t, measured, allowed });
        }
        let obs = Observables::of(&state).map_err(|source| DynamicsError::Concurrence { time: t, source })?;
        traj.defects = traj.defects.worst(defects);
        traj.times.push(t);
        traj.states.push(state);
        traj.derived.push(obs);
        Ok(())
    };

    let stats = match rhs_choice {
        RhsChoice::DickeEq11 | RhsChoice::DickeEq11AsPublished => {
            let transcription = if rhs_choice == RhsChoice::DickeEq11 {
                Transcription::Corrected
            } else {
                Transcription::AsPublished
            };
            integrate_sampled(
                |rho| dicke_rhs_with(rho, params, transcription),
                *initial.rho(),
                &ctl,
                cfg.output_dt,
                n,
                |k, t, rho| record(k, t, rho, true),
            )?
        }
        RhsChoice::BareEq1 => {
            let liouvillian = BareLiouvillian::new(params);
            integrate_sampled(
                |rho| liouvillian.apply(rho),
                *from_dicke(initial).rho(),
                &ctl,
                cfg.output_dt,
                n,
                |k, t, rho| record(k, t, rho, false),
            )?
        }
    };
    traj.stats = stats;
    Ok(traj)
}
