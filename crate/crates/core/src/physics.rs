//! Geometry-derived collective couplings for two identical two-level atoms.
//!
//! All rates are in units of the single-atom half-width `γ` unless a caller
//! passes a different `gamma`; `2γ` is the individual spontaneous decay rate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("k0·r12 must be positive, got {0}")]
    NonPositiveSeparation(f64),
    #[error("k0·r12 = {0:.3e} is below {min:.0e}; the dipole-dipole shift diverges", min = tol::MIN_K0R)]
    DegenerateSeparation(f64),
    #[error("{name} = {value} is outside [0, π]")]
    AngleOutOfRange { name: &'static str, value: f64 },
    #[error("{name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} = {value} is not finite")]
    NonFinite { name: &'static str, value: f64 },
    #[error("unphysical rate: |{name}| = {value} exceeds gamma = {gamma}")]
    Unphysical { name: &'static str, value: f64, gamma: f64 },
}

/// Dipole orientation model used for the couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `γ₁₂ = γ sin x / x`, `Ω₁₂ = -γ cos x / x`.
    Random,
    /// Fixed angle (radians) between the dipole moment and the interatomic axis.
    FixedTheta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Interatomic distance in units of the radiation wavelength.
    pub r12_over_lambda: f64,
    /// Angle between the exciting wave vector and the interatomic axis, radians.
    pub xi: f64,
    pub orientation: Orientation,
}

impl Geometry {
    pub fn new(r12_over_lambda: f64, xi: f64, orientation: Orientation) -> Result<Self, PhysicsError> {
        let g = Self { r12_over_lambda, xi, orientation };
        g.validate()?;
        Ok(g)
    }

    pub fn random(r12_over_lambda: f64, xi: f64) -> Result<Self, PhysicsError> {
        Self::new(r12_over_lambda, xi, Orientation::Random)
    }

    pub fn validate(&self) -> Result<(), PhysicsError> {
        if !(self.r12_over_lambda.is_finite() && self.r12_over_lambda > 0.0) {
            return Err(PhysicsError::NonPositive { name: "r12", value: self.r12_over_lambda });
        }
        check_angle("xi", self.xi)?;
        if let Orientation::FixedTheta(theta) = self.orientation {
            check_angle("theta", theta)?;
        }
        Ok(())
    }

    /// `k₀ r₁₂ = 2π r₁₂/λ`.
    pub fn k0r(&self) -> f64 {
        2.0 * PI * self.r12_over_lambda
    }
}

fn check_angle(name: &'static str, value: f64) -> Result<(), PhysicsError> {
    if !(0.0..=PI).contains(&value) {
        return Err(PhysicsError::AngleOutOfRange { name, value });
    }
    Ok(())
}

fn check_k0r(k0r: f64) -> Result<(), PhysicsError> {
    if !(k0r > 0.0) {
        return Err(PhysicsError::NonPositiveSeparation(k0r));
    }
    if k0r < tol::MIN_K0R {
        return Err(PhysicsError::DegenerateSeparation(k0r));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    /// Cooperative decay rate.
    pub gamma12: f64,
    /// Dipole-dipole interaction.
    pub omega12: f64,
}

pub fn coupling_random_orientation(k0r: f64, gamma: f64) -> Result<Couplings, PhysicsError> {
    check_k0r(k0r)?;
    Ok(Couplings {
        gamma12: gamma * k0r.sin() / k0r,
        omega12: -gamma * k0r.cos() / k0r,
    })
}

pub fn coupling_fixed_theta(k0r: f64, theta: f64, gamma: f64) -> Result<Couplings, PhysicsError> {
    check_k0r(k0r)?;
    check_angle("theta", theta)?;
    let cos2 = theta.cos().powi(2);
    let (s, c) = k0r.sin_cos();
    let (x, x2, x3) = (k0r, k0r * k0r, k0r * k0r * k0r);
    let omega12 = 1.5 * gamma * ((1.0 - 3.0 * cos2) * (s / x2 + c / x3) - (1.0 - cos2) * s / x);
    let gamma12 = 1.5 * gamma * ((1.0 - cos2) * s / x + (1.0 - 3.0 * cos2) * (c / x2 - s / x3));
    Ok(Couplings { gamma12, omega12 })
}

/// Relative excitation phase `φ = 2π (r₁₂/λ) cos ξ` imprinted by the exciting photon.
pub fn excitation_phase(geom: &Geometry) -> f64 {
    2.0 * PI * geom.r12_over_lambda * geom.xi.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub gamma: f64,
    pub gamma12: f64,
    pub omega12: f64,
    pub phi: f64,
    pub omega0: f64,
}

impl SystemParams {
    pub fn new(gamma: f64, gamma12: f64, omega12: f64, phi: f64, omega0: f64) -> Result<Self, PhysicsError> {
        let p = Self { gamma, gamma12, omega12, phi, omega0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PhysicsError> {
        for (name, value) in [
            ("gamma", self.gamma),
            ("gamma12", self.gamma12),
            ("omega12", self.omega12),
            ("phi", self.phi),
            ("omega0", self.omega0),
        ] {
            if !value.is_finite() {
                return Err(PhysicsError::NonFinite { name, value });
            }
        }
        if self.gamma <= 0.0 {
            return Err(PhysicsError::NonPositive { name: "gamma", value: self.gamma });
        }
        if self.omega0 < 0.0 {
            return Err(PhysicsError::NonPositive { name: "omega0", value: self.omega0 });
        }
        // small slack so sinc round-off at x -> 0 is not flagged
        if self.gamma12.abs() > self.gamma * (1.0 + 1e-12) {
            return Err(PhysicsError::Unphysical { name: "gamma12", value: self.gamma12, gamma: self.gamma });
        }
        Ok(())
    }

    /// Collective rates `Γ± = 2(γ ± γ₁₂ cos φ)` of `|s⟩` and `|a⟩`.
    pub fn decay_rates(&self) -> (f64, f64) {
        let shift = self.gamma12 * self.phi.cos();
        (2.0 * (self.gamma + shift), 2.0 * (self.gamma - shift))
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    pub fn with_omega0(self, omega0: f64) -> Self {
        Self { omega0, ..self }
    }
}

/// Collective level shift `Δ = Ω₁₂ cos φ` of `|s⟩` (up) and `|a⟩` (down).
pub fn level_shift(params: &SystemParams) -> f64 {
    params.omega12 * params.phi.cos()
}

pub fn params_from_geometry(geom: &Geometry, gamma: f64, omega0: f64) -> Result<SystemParams, PhysicsError> {
    geom.validate()?;
    let k0r = geom.k0r();
    let couplings = match geom.orientation {
        Orientation::Random => coupling_random_orientation(k0r, gamma)?,
        Orientation::FixedTheta(theta) => coupling_fixed_theta(k0r, theta, gamma)?,
    };
    SystemParams::new(gamma, couplings.gamma12, couplings.omega12, excitation_phase(geom), omega0)
}
