//! Numerical tolerances shared by the library and its tests.
//!
//! Every threshold that decides pass/fail somewhere in the crate lives here so
//! that library checks and test assertions cannot drift apart.

/// Relative residual bound for a computed eigenvalue: `|det(m - λI)| <= tol * ‖m‖⁴`.
pub const EIG_RESIDUAL: f64 = 1e-9;

/// Largest `‖m - m†‖∞` accepted by the Hermitian eigen-solver.
pub const HERMITIAN_INPUT: f64 = 1e-10;

/// Hermiticity defect allowed in a valid density matrix.
pub const STATE_HERMITICITY: f64 = 1e-10;

/// `|trace - 1|` allowed in a valid density matrix.
pub const STATE_TRACE: f64 = 1e-10;

/// Most negative eigenvalue allowed in a valid density matrix.
pub const STATE_POSITIVITY: f64 = 1e-8;

/// Integrated states may exceed the state tolerances by this factor before the
/// integrator reports an invariant violation.
pub const INTEGRATION_SLACK: f64 = 10.0;

/// Imaginary parts or negative real parts of the `ρρ̃` spectrum below this are
/// treated as round-off and clamped to zero.
pub const SPECTRUM_CLAMP: f64 = 1e-7;

/// Largest off-block magnitude for a matrix still treated as X-shaped.
pub const BLOCK_FORM: f64 = 1e-9;

/// Smallest accepted `k₀ r₁₂`; the dipole-dipole shift diverges as `1/k₀r₁₂`.
pub const MIN_K0R: f64 = 1e-6;

/// Relative distance of `|γ₁₂|` from `γ` below which the mixed-state closed
/// form is refused.
pub const MIXED_SINGULARITY: f64 = 1e-6;

/// Concurrence at or below this value counts as dead.
pub const ZERO_THRESHOLD: f64 = 1e-6;

/// Agreement required between a closed form and the integrated dynamics.
pub const ANALYTIC_AGREEMENT: f64 = 1e-6;

/// Elementwise agreement required between the two equation-of-motion routes.
pub const DUAL_FORMULATION: f64 = 1e-7;
