//! Two-atom density matrices in the phase-bearing product basis and in the
//! timed Dicke basis.
//!
//! Product ("bare") ordering: `|1⟩ = |e₁e₂⟩e^{ik₀·(r₁+r₂)}`, `|2⟩ = |e₁g₂⟩e^{ik₀·r₁}`,
//! `|3⟩ = |g₁e₂⟩e^{ik₀·r₂}`, `|4⟩ = |g₁g₂⟩` (indices 0..3).
//!
//! Dicke ordering: `|e⟩ = |1⟩`, `|s⟩ = (|2⟩+|3⟩)/√2`, `|a⟩ = (|2⟩-|3⟩)/√2`,
//! `|g⟩ = |4⟩` (indices 0..3).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use thiserror::Error;

use crate::complexmat::{eigenvalues_hermitian, Complex, ComplexMatrix4, LinalgError};
use crate::tol;

pub const E: usize = 0;
pub const S: usize = 1;
pub const A: usize = 2;
pub const G: usize = 3;

/// Which density-matrix property failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Finite,
    Hermiticity,
    Trace,
    Positivity,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Finite => "finiteness",
            Invariant::Hermiticity => "hermiticity",
            Invariant::Trace => "unit trace",
            Invariant::Positivity => "positivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("{invariant} violated (measured {measured:.3e}, allowed {allowed:.3e})")]
    Violation { invariant: Invariant, measured: f64, allowed: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Measured distance of a matrix from being a density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct InvariantDefects {
    pub hermiticity: f64,
    pub trace: f64,
    /// Smallest eigenvalue (negative means a positivity defect).
    pub min_eigenvalue: f64,
}

impl InvariantDefects {
    pub fn measure(rho: &ComplexMatrix4) -> Result<Self, StateError> {
        if !rho.is_finite() {
            return Err(StateError::Violation { invariant: Invariant::Finite, measured: f64::NAN, allowed: 0.0 });
        }
        let hermiticity = rho.hermiticity_defect();
        let trace = (rho.trace() - Complex::new(1.0, 0.0)).norm();
        // measure positivity on the Hermitian part so a small defect does not
        // mask the spectrum
        let herm = (*rho + rho.hermitian_conjugate()) * 0.5;
        let min_eigenvalue = eigenvalues_hermitian(&herm)?[3];
        Ok(Self { hermiticity, trace, min_eigenvalue })
    }

    /// Check against the state tolerances scaled by `slack`.
    pub fn check(&self, slack: f64) -> Result<(), StateError> {
        let herm = tol::STATE_HERMITICITY * slack;
        if self.hermiticity >= herm {
            return Err(StateError::Violation { invariant: Invariant::Hermiticity, measured: self.hermiticity, allowed: herm });
        }
        let tr = tol::STATE_TRACE * slack;
        if self.trace >= tr {
            return Err(StateError::Violation { invariant: Invariant::Trace, measured: self.trace, allowed: tr });
        }
        let pos = tol::STATE_POSITIVITY * slack;
        if self.min_eigenvalue <= -pos {
            return Err(StateError::Violation {
                invariant: Invariant::Positivity,
                measured: self.min_eigenvalue,
                allowed: -pos,
            });
        }
        Ok(())
    }

    /// Worst-case merge, for accumulating over a trajectory.
    pub fn worst(self, other: Self) -> Self {
        Self {
            hermiticity: self.hermiticity.max(other.hermiticity),
            trace: self.trace.max(other.trace),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
        }
    }

    pub fn ideal() -> Self {
        Self { hermiticity: 0.0, trace: 0.0, min_eigenvalue: f64::INFINITY }
    }
}

pub fn validate_density_matrix(rho: &ComplexMatrix4) -> Result<(), StateError> {
    InvariantDefects::measure(rho)?.check(1.0)
}

/// Rows are `⟨e|, ⟨s|, ⟨a|, ⟨g|` expressed in the product basis, so
/// `ρ_dicke = T ρ_bare T†`.
pub fn dicke_transform() -> ComplexMatrix4 {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix4::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Density matrix in the timed Dicke basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeState {
    rho: ComplexMatrix4,
}

/// Density matrix in the phase-bearing product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareState {
    rho: ComplexMatrix4,
}

macro_rules! density_matrix_impl {
    ($t:ident) => {
        impl $t {
            /// Validates the density-matrix invariants.
            pub fn new(rho: ComplexMatrix4) -> Result<Self, StateError> {
                validate_density_matrix(&rho)?;
                Ok(Self { rho })
            }

            /// Skips validation; for integrator internals and deliberately
            /// unphysical test inputs.
            pub fn new_unchecked(rho: ComplexMatrix4) -> Self {
                Self { rho }
            }

            pub fn rho(&self) -> &ComplexMatrix4 {
                &self.rho
            }

            pub fn into_inner(self) -> ComplexMatrix4 {
                self.rho
            }

            pub fn defects(&self) -> Result<InvariantDefects, StateError> {
                InvariantDefects::measure(&self.rho)
            }
        }
    };
}

density_matrix_impl!(DickeState);
density_matrix_impl!(BareState);

impl DickeState {
    pub fn pure_basis(index: usize) -> Self {
        Self { rho: ComplexMatrix4::unit(index, index) }
    }

    /// `ρ_ss = 1`.
    pub fn symmetric() -> Self {
        Self::pure_basis(S)
    }

    /// `ρ_ee = 1`.
    pub fn doubly_excited() -> Self {
        Self::pure_basis(E)
    }

    pub fn ground() -> Self {
        Self::pure_basis(G)
    }

    pub fn element(&self, row: usize, col: usize) -> Complex {
        self.rho[(row, col)]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.rho[(index, index)].re
    }

    /// True when the product-basis image has the X (block) shape, i.e. the
    /// one-excitation/two-excitation coherences `ρ_es, ρ_ea, ρ_gs, ρ_ga` vanish.
    pub fn is_block_form(&self) -> bool {
        self.off_block_magnitude() < tol::BLOCK_FORM
    }

    pub fn off_block_magnitude(&self) -> f64 {
        [(E, S), (E, A), (G, S), (G, A), (S, E), (A, E), (S, G), (A, G)]
            .iter()
            .map(|&ij| self.rho[ij].norm())
            .fold(0.0, f64::max)
    }
}

/// Product-basis positions that vanish for an X-shaped matrix.
pub const OFF_BLOCK: [(usize, usize); 8] = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (2, 3), (3, 1), (3, 2)];

pub fn off_block_magnitude(rho: &ComplexMatrix4) -> f64 {
    OFF_BLOCK.iter().map(|&ij| rho[ij].norm()).fold(0.0, f64::max)
}

pub fn to_dicke(state: &BareState) -> DickeState {
    DickeState { rho: dicke_transform().conjugate_by(&state.rho) }
}

pub fn from_dicke(state: &DickeState) -> BareState {
    BareState { rho: dicke_transform().hermitian_conjugate().conjugate_by(&state.rho) }
}
