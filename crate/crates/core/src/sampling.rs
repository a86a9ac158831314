//! Seeded random density matrices for conformance checks.
//!
//! Full-rank states are `G G† / tr(G G†)` with `G` drawn entrywise from a
//! standard complex normal. Block (X-shaped) states zero the off-block entries
//! of such a matrix; the two surviving 2×2 blocks are principal submatrices of
//! a positive matrix, so the result stays positive.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::complexmat::{Complex, ComplexMatrix4, DIM};
use crate::state::OFF_BLOCK;

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix4 {
    let g = ComplexMatrix4::from_fn(|_, _| complex_normal(rng));
    normalise(g * g.hermitian_conjugate())
}

/// Random X-shaped state in the product basis.
pub fn random_block_state<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix4 {
    let mut rho = random_density_matrix(rng);
    for ij in OFF_BLOCK {
        rho[ij] = Complex::new(0.0, 0.0);
    }
    normalise(rho)
}

/// `ρ_A ⊗ ρ_B` for random single-qubit states, in the product basis.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix4 {
    let qubit = |rng: &mut R| {
        let g: [[Complex; 2]; 2] = [[complex_normal(rng), complex_normal(rng)], [complex_normal(rng), complex_normal(rng)]];
        let mut m = [[Complex::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = g[i][0] * g[j][0].conj() + g[i][1] * g[j][1].conj();
            }
        }
        let tr = m[0][0] + m[1][1];
        m.map(|row| row.map(|z| z / tr))
    };
    let a = qubit(rng);
    let b = qubit(rng);
    ComplexMatrix4::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
}

fn normalise(mut rho: ComplexMatrix4) -> ComplexMatrix4 {
    let tr = rho.trace().re;
    rho = rho * (1.0 / tr);
    // exact Hermitian symmetry
    let mut out = rho;
    for i in 0..DIM {
        out[(i, i)] = Complex::new(rho[(i, i)].re, 0.0);
        for j in i + 1..DIM {
            out[(j, i)] = rho[(i, j)].conj();
        }
    }
    out
}
