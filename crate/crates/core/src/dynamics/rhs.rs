//! Right-hand sides of the master equation.
//!
//! [`dicke_rhs`] is the element-by-element equation system written directly in
//! the timed Dicke basis. [`bare_liouvillian_rhs`] builds the same generator
//! from explicit atomic lowering operators in the phase-bearing product basis.
//! The two share no code beyond the matrix type, so their agreement is a real
//! check.

use serde::{Deserialize, Serialize};

use crate::complexmat::{Complex, ComplexMatrix4, DIM};
use crate::physics::SystemParams;
use crate::state::{A, E, G, S};

/// Coefficient of `ρ_es` in the `ρ_ea` equation.
///
/// The commonly quoted element equations print it as `i sinφ (γ₁₂ + iΩ₁₂)`;
/// expanding the operator master equation gives `-i sinφ (γ₁₂ - iΩ₁₂)`. The two
/// differ only in the sign of the `γ₁₂` part and only touch the coherences
/// between `|e⟩` and the one-excitation states, which vanish for X-shaped
/// states. The printed form does not preserve positivity for general states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transcription {
    /// Coefficient consistent with the operator master equation.
    Corrected,
    /// Coefficient as printed.
    AsPublished,
}

fn i() -> Complex {
    Complex::new(0.0, 1.0)
}

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `dρ/dt` in the Dicke basis with the operator-consistent coefficient set.
pub fn dicke_rhs(rho: &ComplexMatrix4, params: &SystemParams) -> ComplexMatrix4 {
    dicke_rhs_with(rho, params, Transcription::Corrected)
}

pub fn dicke_rhs_with(rho: &ComplexMatrix4, params: &SystemParams, transcription: Transcription) -> ComplexMatrix4 {
    let SystemParams { gamma: g, gamma12: g12, omega12: om, phi, omega0: w0 } = *params;
    let (s, c) = phi.sin_cos();
    let r = |a: usize, b: usize| rho[(a, b)];

    // sinφ(γ₁₂ ∓ iΩ₁₂) with the leading i
    let cross_minus = i() * s * Complex::new(g12, -om);
    let cross_plus = i() * s * Complex::new(g12, om);
    let up = 2.0 * (g + g12 * c); // Γ+
    let down = 2.0 * (g - g12 * c); // Γ-
    let ea_from_es = match transcription {
        Transcription::Corrected => -cross_minus,
        Transcription::AsPublished => cross_plus,
    };

    let mut d = ComplexMatrix4::zeros();
    d[(E, E)] = re(-4.0 * g) * r(E, E);
    d[(E, S)] = -Complex::new(3.0 * g + g12 * c, w0 - om * c) * r(E, S) + cross_minus * r(E, A);
    d[(E, A)] = -Complex::new(3.0 * g - g12 * c, w0 + om * c) * r(E, A) + ea_from_es * r(E, S);
    d[(E, G)] = -Complex::new(2.0 * g, 2.0 * w0) * r(E, G);
    d[(S, S)] = re(-up) * r(S, S) - cross_plus * r(A, S) + cross_minus * r(S, A) + re(up) * r(E, E);
    d[(A, A)] = re(-down) * r(A, A) - cross_minus * r(A, S) + cross_plus * r(S, A) + re(down) * r(E, E);
    d[(A, S)] = -Complex::new(2.0 * g, -2.0 * om * c) * r(A, S) + cross_plus * r(S, S) + cross_minus * r(A, A)
        - i() * (2.0 * g12 * s) * r(E, E);
    d[(G, S)] = -Complex::new(g + g12 * c, -(w0 + om * c)) * r(G, S)
        + cross_minus * r(G, A)
        + re(up) * r(S, E)
        + i() * (2.0 * g12 * s) * r(A, E);
    d[(G, A)] = -Complex::new(g - g12 * c, -(w0 - om * c)) * r(G, A) - cross_minus * r(G, S) - re(down) * r(A, E)
        + i() * (2.0 * g12 * s) * r(S, E);
    d[(G, G)] = re(up) * r(S, S) + re(down) * r(A, A) + i() * (2.0 * g12 * s) * (r(A, S) - r(S, A));

    // remaining elements are the conjugates of the ones above
    for (a, b) in [(E, S), (E, A), (E, G), (A, S), (G, S), (G, A)] {
        d[(b, a)] = d[(a, b)].conj();
    }
    d
}

/// Atomic lowering operators `σ₁, σ₂` in the phase-bearing product basis for
/// excitation phases `k₀·r₁ = alpha1`, `k₀·r₂ = alpha2`.
pub fn lowering_operators(alpha1: f64, alpha2: f64) -> [ComplexMatrix4; 2] {
    let p1 = Complex::from_polar(1.0, alpha1);
    let p2 = Complex::from_polar(1.0, alpha2);
    // σ₁: |e₁e₂⟩ -> |g₁e₂⟩, |e₁g₂⟩ -> |g₁g₂⟩
    let sigma1 = (ComplexMatrix4::unit(2, 0) + ComplexMatrix4::unit(3, 1)) * p1;
    // σ₂: |e₁e₂⟩ -> |e₁g₂⟩, |g₁e₂⟩ -> |g₁g₂⟩
    let sigma2 = (ComplexMatrix4::unit(1, 0) + ComplexMatrix4::unit(3, 2)) * p2;
    [sigma1, sigma2]
}

fn commutator(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexMatrix4 {
    a.matmul(b) - b.matmul(a)
}

/// `dρ/dt` in the product basis, evaluated from the operator form
///
/// ```text
/// -iω₀ Σᵢ[σᶻᵢ, ρ] - i Σ_{i≠j} Ω_ij [σᵢ†σⱼ, ρ] - Σ_ij γ_ij (ρσᵢ†σⱼ + σᵢ†σⱼρ - 2σⱼρσᵢ†)
/// ```
///
/// Atom 2 sits at the phase origin, so `k₀·r₁ = φ`.
pub fn bare_liouvillian_rhs(rho: &ComplexMatrix4, params: &SystemParams) -> ComplexMatrix4 {
    let sigma = lowering_operators(params.phi, 0.0);
    let mut out = ComplexMatrix4::zeros();
    for s in &sigma {
        let sz = (s.hermitian_conjugate().matmul(s) - s.matmul(&s.hermitian_conjugate())) * 0.5;
        out += commutator(&sz, rho) * Complex::new(0.0, -params.omega0);
    }
    for i_atom in 0..2 {
        for j_atom in 0..2 {
            let hop = sigma[i_atom].hermitian_conjugate().matmul(&sigma[j_atom]);
            if i_atom != j_atom {
                out += commutator(&hop, rho) * Complex::new(0.0, -params.omega12);
            }
            let rate = if i_atom == j_atom { params.gamma } else { params.gamma12 };
            let jump = sigma[j_atom].matmul(rho).matmul(&sigma[i_atom].hermitian_conjugate());
            out += (rho.matmul(&hop) + hop.matmul(rho) - jump * 2.0) * (-rate);
        }
    }
    out
}

/// The product-basis generator as a 16×16 superoperator acting on the
/// row-major flattening of `ρ`. Columns are the images of the matrix units.
#[derive(Debug, Clone)]
pub struct BareLiouvillian {
    matrix: Box<[[Complex; DIM * DIM]; DIM * DIM]>,
}

impl BareLiouvillian {
    pub fn new(params: &SystemParams) -> Self {
        let mut matrix = Box::new([[Complex::new(0.0, 0.0); DIM * DIM]; DIM * DIM]);
        for k in 0..DIM {
            for l in 0..DIM {
                let col = k * DIM + l;
                let image = bare_liouvillian_rhs(&ComplexMatrix4::unit(k, l), params).to_flat();
                for (row, z) in image.iter().enumerate() {
                    matrix[row][col] = *z;
                }
            }
        }
        Self { matrix }
    }

    pub fn apply(&self, rho: &ComplexMatrix4) -> ComplexMatrix4 {
        let v = rho.to_flat();
        let mut out = [Complex::new(0.0, 0.0); DIM * DIM];
        for (o, row) in out.iter_mut().zip(self.matrix.iter()) {
            *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        ComplexMatrix4::from_flat(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_density_matrix;
    use crate::state::{from_dicke, to_dicke, DickeState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn eighth(phi: f64) -> SystemParams {
        let x = PI / 4.0;
        SystemParams::new(1.0, x.sin() / x, -x.cos() / x, phi, 0.0).unwrap()
    }

    #[test]
    fn doubly_excited_decays_at_four_gamma() {
        let d = dicke_rhs(DickeState::doubly_excited().rho(), &eighth(0.3));
        assert!((d[(E, E)] - re(-4.0)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_state_without_phase() {
        let p = eighth(0.0);
        let d = dicke_rhs(DickeState::symmetric().rho(), &p);
        assert!((d[(S, S)].re + 2.0 * (1.0 + p.gamma12)).abs() < 1e-15);
        assert!(d[(A, S)].norm() < 1e-15);
    }

    #[test]
    fn trace_free_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let rho = random_density_matrix(&mut rng);
            let p = eighth(0.7).with_omega0(3.0);
            assert!(dicke_rhs(&rho, &p).trace().norm() < 1e-12);
            let b = bare_liouvillian_rhs(&rho, &p);
            assert!(b.trace().norm() < 1e-12);
            assert!(b.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn independent_decay_from_single_excitation() {
        let p = SystemParams::new(1.0, 0.0, 0.0, 0.4, 0.0).unwrap();
        let d = bare_liouvillian_rhs(&ComplexMatrix4::unit(1, 1), &p);
        assert!((d[(1, 1)] - re(-2.0)).norm() < 1e-15);
        assert!((d[(3, 3)] - re(2.0)).norm() < 1e-15);
    }

    #[test]
    fn ground_state_is_stationary() {
        let p = eighth(1.1).with_omega0(2.0);
        assert!(bare_liouvillian_rhs(&ComplexMatrix4::unit(3, 3), &p).max_abs() == 0.0);
        assert!(dicke_rhs(DickeState::ground().rho(), &p).max_abs() == 0.0);
    }

    #[test]
    fn superoperator_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = eighth(0.9).with_omega0(1.5);
        let l = BareLiouvillian::new(&p);
        for _ in 0..10 {
            let rho = random_density_matrix(&mut rng);
            assert!((l.apply(&rho) - bare_liouvillian_rhs(&rho, &p)).max_abs() < 1e-14);
        }
    }

    #[test]
    fn corrected_generator_equals_operator_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for phi in [0.0, 0.4, PI / 4.0, 2.0, PI] {
            let p = eighth(phi).with_omega0(0.8);
            for _ in 0..10 {
                let rho = random_density_matrix(&mut rng);
                let dicke = DickeState::new_unchecked(rho);
                let via_bare = to_dicke(&crate::state::BareState::new_unchecked(bare_liouvillian_rhs(
                    from_dicke(&dicke).rho(),
                    &p,
                )));
                let diff = (*via_bare.rho() - dicke_rhs(&rho, &p)).max_abs();
                assert!(diff < 1e-13, "phi = {phi}: {diff}");
            }
        }
    }

    #[test]
    fn printed_coefficient_differs_only_in_ea_coherence() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = eighth(PI / 4.0);
        let rho = random_density_matrix(&mut rng);
        let diff = dicke_rhs_with(&rho, &p, Transcription::AsPublished) - dicke_rhs(&rho, &p);
        for (r, c, z) in diff.iter() {
            if (r, c) == (E, A) || (r, c) == (A, E) {
                // (-γ₁₂ ... ) vs (+γ₁₂ ...): difference is 2iγ₁₂ sinφ ρ_es
                let expected = i() * (2.0 * p.gamma12 * p.phi.sin()) * rho[(E, S)];
                let expected = if r == E { expected } else { expected.conj() };
                assert!((z - expected).norm() < 1e-14);
            } else {
                assert_eq!(z.norm(), 0.0, "({r},{c})");
            }
        }
        // and nothing changes for X-shaped states
        let x = DickeState::symmetric();
        assert_eq!(
            dicke_rhs_with(x.rho(), &p, Transcription::AsPublished),
            dicke_rhs(x.rho(), &p)
        );
    }
}
