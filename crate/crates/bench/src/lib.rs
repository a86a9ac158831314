//! Fixtures shared by the kernel benchmarks.

use dicke_core::sampling::{random_block_state, random_density_matrix};
use dicke_core::selftest::eighth_wavelength;
use dicke_core::state::to_dicke;
use dicke_core::{BareState, ComplexMatrix4, DickeState, SystemParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn full_rank_state(seed: u64) -> ComplexMatrix4 {
    random_density_matrix(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn x_state(seed: u64) -> ComplexMatrix4 {
    random_block_state(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn dicke_state(seed: u64) -> DickeState {
    to_dicke(&BareState::new_unchecked(full_rank_state(seed)))
}

/// λ/8 separation with a quarter-turn excitation phase.
pub fn params() -> SystemParams {
    eighth_wavelength(std::f64::consts::FRAC_PI_4)
}
