//! Wootters concurrence.
//!
//! Three routes to the same number: the spectrum of `ρρ̃` for any state, closed
//! forms for X-shaped states in the product basis, and the same closed forms
//! rewritten in Dicke-basis elements.

use serde::Serialize;
use thiserror::Error;

use crate::complexmat::{eigenvalues_general, ComplexMatrix4, LinalgError};
use crate::state::{from_dicke, off_block_magnitude, DickeState, A, E, G, S};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntanglementError {
    #[error("matrix is not X-shaped (largest off-block entry {max_off_block:.3e})")]
    NotBlockForm { max_off_block: f64 },
    #[error("eigenvalue {re:.3e}{im:+.3e}i of ρρ̃ is not a non-negative real")]
    InvalidSpectrum { re: f64, im: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceBreakdown {
    /// `max(0, √λ₁ - √λ₂ - √λ₃ - √λ₄)`.
    pub c: f64,
    /// One-excitation branch `2(|ρ₂₃| - √(ρ₁₁ρ₄₄))`; may be negative.
    pub c1: f64,
    /// Two-excitation branch `2(|ρ₁₄| - √(ρ₂₂ρ₃₃))`; may be negative.
    pub c2: f64,
    /// `√λᵢ`, descending.
    pub sqrt_eigs: [f64; 4],
}

impl ConcurrenceBreakdown {
    /// The larger branch before clamping at zero.
    pub fn signed(&self) -> f64 {
        self.c1.max(self.c2)
    }
}

fn sqrt_clamped(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn sort_desc(mut v: [f64; 4]) -> [f64; 4] {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `σ_y⊗σ_y ρ* σ_y⊗σ_y` in the product basis.
pub fn spin_flip(rho: &ComplexMatrix4) -> ComplexMatrix4 {
    let yy = ComplexMatrix4::from_real_rows([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]);
    yy.matmul(&rho.conj()).matmul(&yy)
}

/// Closed-form branches and `√λ` set of an X-shaped product-basis matrix.
fn block_closed_form(rho: &ComplexMatrix4) -> (f64, f64, [f64; 4]) {
    let p11 = rho[(0, 0)].re;
    let p22 = rho[(1, 1)].re;
    let p33 = rho[(2, 2)].re;
    let p44 = rho[(3, 3)].re;
    let c23 = rho[(1, 2)].norm();
    let c14 = rho[(0, 3)].norm();
    let inner = sqrt_clamped(p22 * p33);
    let outer = sqrt_clamped(p11 * p44);
    let c1 = 2.0 * (c23 - outer);
    let c2 = 2.0 * (c14 - inner);
    let eigs = sort_desc([inner + c23, (inner - c23).max(0.0), outer + c14, (outer - c14).max(0.0)]);
    (c1, c2, eigs)
}

/// Concurrence from the spectrum of `ρρ̃`; valid for any two-qubit state in
/// the product basis. The reported `c1`, `c2` are the closed-form branches
/// evaluated on the same matrix and only carry meaning for X-shaped input.
pub fn concurrence_general(rho: &ComplexMatrix4) -> Result<ConcurrenceBreakdown, EntanglementError> {
    let product = rho.matmul(&spin_flip(rho));
    let eig = eigenvalues_general(&product)?;
    let mut roots = [0.0; 4];
    for (r, z) in roots.iter_mut().zip(eig) {
        if z.im.abs() > tol::SPECTRUM_CLAMP || z.re < -tol::SPECTRUM_CLAMP {
            return Err(EntanglementError::InvalidSpectrum { re: z.re, im: z.im });
        }
        *r = sqrt_clamped(z.re);
    }
    let sqrt_eigs = sort_desc(roots);
    let c = (sqrt_eigs[0] - sqrt_eigs[1] - sqrt_eigs[2] - sqrt_eigs[3]).max(0.0);
    let (c1, c2, _) = block_closed_form(rho);
    Ok(ConcurrenceBreakdown { c, c1, c2, sqrt_eigs })
}

/// Closed-form concurrence of an X-shaped product-basis matrix.
pub fn concurrence_block(rho: &ComplexMatrix4) -> Result<ConcurrenceBreakdown, EntanglementError> {
    let max_off_block = off_block_magnitude(rho);
    if max_off_block >= tol::BLOCK_FORM {
        return Err(EntanglementError::NotBlockForm { max_off_block });
    }
    let (c1, c2, sqrt_eigs) = block_closed_form(rho);
    Ok(ConcurrenceBreakdown { c: c1.max(c2).max(0.0), c1, c2, sqrt_eigs })
}

/// Closed-form concurrence written in Dicke-basis elements.
pub fn concurrence_dicke(state: &DickeState) -> Result<ConcurrenceBreakdown, EntanglementError> {
    let max_off_block = state.off_block_magnitude();
    if max_off_block >= tol::BLOCK_FORM {
        return Err(EntanglementError::NotBlockForm { max_off_block });
    }
    let ee = state.population(E);
    let ss = state.population(S);
    let aa = state.population(A);
    let gg = state.population(G);
    let coh = state.element(A, S);
    let c1 = ((ss - aa).powi(2) + 4.0 * coh.im * coh.im).sqrt() - 2.0 * sqrt_clamped(ee * gg);
    // 2√(ρ₂₂ρ₃₃) with ρ₂₂, ρ₃₃ = ½(ρ_ss + ρ_aa ± 2 Re ρ_as)
    let c2 = 2.0 * state.element(E, G).norm() - sqrt_clamped((ss + aa).powi(2) - 4.0 * coh.re * coh.re);
    let (_, _, sqrt_eigs) = block_closed_form(from_dicke(state).rho());
    Ok(ConcurrenceBreakdown { c: c1.max(c2).max(0.0), c1, c2, sqrt_eigs })
}

/// Closed form when the state is X-shaped, spectrum otherwise.
pub fn concurrence(state: &DickeState) -> Result<ConcurrenceBreakdown, EntanglementError> {
    if state.is_block_form() {
        concurrence_dicke(state)
    } else {
        concurrence_general(from_dicke(state).rho())
    }
}
