//! Closed-form concurrence solutions, kept as printed so they can be tested
//! against the integrated dynamics rather than trusted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexmat::{Complex, ComplexMatrix4};
use crate::physics::SystemParams;
use crate::state::{BareState, StateError};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("invalid mixed-state parameters: {0}")]
    InvalidSpec(String),
    #[error("initial state is not a density matrix: {0}")]
    InvalidState(#[from] StateError),
    #[error("closed form is singular at |gamma12| = gamma ({gamma12} vs {gamma}); integrate the dynamics instead")]
    Singular { gamma12: f64, gamma: f64 },
    #[error("closed form needs b = c = 1, got b = {b}, c = {c}")]
    UnsupportedFamily { b: f64, c: f64 },
    #[error("closed form assumes zero excitation phase, got phi = {0}")]
    NonZeroPhase(f64),
    #[error("negative radicand {value:.6e} at t = {t}")]
    NegativeRadicand { t: f64, value: f64 },
}

/// Werner-type initial state
/// `ρ(0) = ⅓ (a|1⟩⟨1| + (1-a)|4⟩⟨4| + [[b, z], [z*, c]] on |2⟩,|3⟩)`, `z = √(bc) e^{iχ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedInitialSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub chi: f64,
}

impl MixedInitialSpec {
    /// `b = c = 1`, the family with a closed-form solution.
    pub fn unit_coherence(a: f64, chi: f64) -> Self {
        Self { a, b: 1.0, c: 1.0, chi }
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        let Self { a, b, c, chi } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite() && chi.is_finite()) {
            return Err(AnalyticError::InvalidSpec("parameters must be finite".into()));
        }
        if !(0.0..=1.0).contains(&a) {
            return Err(AnalyticError::InvalidSpec(format!("a = {a} outside [0, 1]")));
        }
        if b < 0.0 || c < 0.0 {
            return Err(AnalyticError::InvalidSpec(format!("b = {b} and c = {c} must be non-negative")));
        }
        if ((1.0 + b + c) / 3.0 - 1.0).abs() > 1e-12 {
            return Err(AnalyticError::InvalidSpec(format!("normalisation (1 + b + c)/3 = {} != 1", (1.0 + b + c) / 3.0)));
        }
        Ok(())
    }

    fn is_unit_coherence(&self) -> bool {
        (self.b - 1.0).abs() < 1e-12 && (self.c - 1.0).abs() < 1e-12
    }
}

/// The initial density matrix in the product basis.
pub fn build_mixed_initial(spec: &MixedInitialSpec) -> Result<BareState, AnalyticError> {
    spec.validate()?;
    let MixedInitialSpec { a, b, c, chi } = *spec;
    let z = Complex::from_polar((b * c).sqrt(), chi);
    let mut rho = ComplexMatrix4::diag_real([a, b, c, 1.0 - a]);
    rho[(1, 2)] = z;
    rho[(2, 1)] = z.conj();
    Ok(BareState::new(rho * (1.0 / 3.0))?)
}

/// `e^{-2(γ+γ₁₂)t}`: concurrence from `|s⟩` without excitation phase.
pub fn symmetric_concurrence_nophase(t: f64, gamma: f64, gamma12: f64) -> f64 {
    (-2.0 * (gamma + gamma12) * t).exp().max(0.0)
}

/// Concurrence from `|s⟩` with excitation phase:
/// `e^{-2γt} [(cosφ cosh 2γ₁₂t - sinh 2γ₁₂t)² + sin²φ cos² 2Ω₁₂t]^{1/2}`.
pub fn symmetric_concurrence_phase(t: f64, params: &SystemParams) -> f64 {
    let SystemParams { gamma, gamma12, omega12, phi, .. } = *params;
    let x = 2.0 * gamma12 * t;
    let (s, c) = phi.sin_cos();
    let first = c * x.cosh() - x.sinh();
    let second = s * (2.0 * omega12 * t).cos();
    ((-2.0 * gamma * t).exp() * (first * first + second * second).sqrt()).max(0.0)
}

/// Form of the coherence oscillation inside the mixed-state closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceOscillation {
    /// `sin²χ cosh 2Ω₁₂t`, as printed.
    Cosh,
    /// `sin²χ cos² 2Ω₁₂t`, the form used by the pure-state expression.
    CosSquared,
}

/// The bracketed pieces of the mixed-state closed form, before the common
/// `⅔ e^{-2γt}` prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedTerms {
    pub t: f64,
    /// `cosχ cosh 2γ₁₂t - sinh 2γ₁₂t + aη₁`.
    pub lead: f64,
    /// `[lead² + sin²χ · osc]^{1/2}`.
    pub coherence: f64,
    /// `3a(1 - η₂)`, whose square root is subtracted.
    pub radicand: f64,
    pub eta1: f64,
    pub eta2: f64,
    /// `⅔ e^{-2γt}`.
    pub prefactor: f64,
}

impl MixedTerms {
    /// `√(3a(1 - η₂))`, absent when the radicand is negative.
    pub fn population(&self) -> Option<f64> {
        (self.radicand >= -1e-15).then(|| self.radicand.max(0.0).sqrt())
    }

    /// Unclamped concurrence branch.
    pub fn branch(&self) -> Result<f64, AnalyticError> {
        let population =
            self.population().ok_or(AnalyticError::NegativeRadicand { t: self.t, value: self.radicand })?;
        Ok(self.prefactor * (self.coherence - population))
    }
}

pub fn mixed_terms(
    t: f64,
    spec: &MixedInitialSpec,
    params: &SystemParams,
    oscillation: CoherenceOscillation,
) -> Result<MixedTerms, AnalyticError> {
    spec.validate()?;
    if !spec.is_unit_coherence() {
        return Err(AnalyticError::UnsupportedFamily { b: spec.b, c: spec.c });
    }
    if params.phi.sin().abs() > 1e-12 || params.phi.cos() < 0.0 {
        return Err(AnalyticError::NonZeroPhase(params.phi));
    }
    let SystemParams { gamma: g, gamma12: g12, omega12: om, .. } = *params;
    if (g12.abs() - g).abs() < tol::MIXED_SINGULARITY * g {
        return Err(AnalyticError::Singular { gamma12: g12, gamma: g });
    }
    let MixedInitialSpec { a, chi, .. } = *spec;

    let denom = g12 * g12 - g * g;
    let sum_sq = (g * g + g12 * g12) / denom;
    let cross = 2.0 * g * g12 / denom;
    let x = 2.0 * g12 * t;
    let (ch, sh) = (x.cosh(), x.sinh());
    let decay = (-2.0 * g * t).exp();
    let (sin_chi, cos_chi) = chi.sin_cos();

    let eta1 = sum_sq * sh + cross * (decay - ch);
    let eta2 = a / 3.0 * (-4.0 * g * t).exp()
        + 2.0 / 3.0 * decay * (ch - cos_chi * sh + a * sum_sq * (decay - ch) - a * cross * sh);

    let osc = match oscillation {
        CoherenceOscillation::Cosh => (2.0 * om * t).cosh(),
        CoherenceOscillation::CosSquared => (2.0 * om * t).cos().powi(2),
    };
    let lead = cos_chi * ch - sh + a * eta1;
    Ok(MixedTerms {
        t,
        lead,
        coherence: (lead * lead + sin_chi * sin_chi * osc).sqrt(),
        radicand: 3.0 * a * (1.0 - eta2),
        eta1,
        eta2,
        prefactor: 2.0 / 3.0 * decay,
    })
}

/// Mixed-state concurrence at zero excitation phase, exactly as printed.
pub fn mixed_concurrence_nophase(t: f64, spec: &MixedInitialSpec, params: &SystemParams) -> Result<f64, AnalyticError> {
    Ok(mixed_terms(t, spec, params, CoherenceOscillation::Cosh)?.branch()?.max(0.0))
}

/// Independent-atom limit (`γ₁₂ = Ω₁₂ = 0`) of the mixed-state concurrence:
/// `⅔ e^{-2γt} [1 - √(a(1 - a + 2α² + α⁴a))]`, `α² = 1 - e^{-2γt}`.
pub fn yu_eberly_limit(t: f64, a: f64, gamma: f64) -> Result<f64, AnalyticError> {
    if !(0.0..=1.0).contains(&a) {
        return Err(AnalyticError::InvalidSpec(format!("a = {a} outside [0, 1]")));
    }
    let decay = (-2.0 * gamma * t).exp();
    let alpha2 = 1.0 - decay;
    let root = (a * (1.0 - a + 2.0 * alpha2 + alpha2 * alpha2 * a)).sqrt();
    Ok((2.0 / 3.0 * decay * (1.0 - root)).max(0.0))
}
