use std::f64::consts::TAU;

use dicke_core::complexmat::eigenvalues_hermitian;
use dicke_core::dynamics::dicke_rhs;
use dicke_core::sampling::{random_block_state, random_density_matrix};
use dicke_core::state::{to_dicke, A, S};
use dicke_core::{integrate, BareState, DickeState, IntegratorConfig, RhsChoice, SystemParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> impl Strategy<Value = SystemParams> {
    (-1.0..1.0f64, -3.0..3.0f64, 0.0..TAU).prop_map(|(g12, o12, phi)| SystemParams::new(1.0, g12, o12, phi, 0.0).unwrap())
}

fn dicke(seed: u64, block: bool) -> DickeState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = if block { random_block_state(&mut rng) } else { random_density_matrix(&mut rng) };
    to_dicke(&BareState::new(rho).unwrap())
}

fn short() -> IntegratorConfig {
    IntegratorConfig::with_window(1.0, 0.1)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn evolution_stays_a_density_matrix(seed in any::<u64>(), p in params()) {
        let traj = integrate(&dicke(seed, false), &p, &short(), RhsChoice::DickeEq11).unwrap();
        prop_assert!(traj.defects.trace < 1e-9);
        prop_assert!(traj.defects.hermiticity < 1e-9);
        prop_assert!(traj.defects.min_eigenvalue > -1e-7);
        let last = eigenvalues_hermitian(traj.states.last().unwrap().rho()).unwrap();
        prop_assert!(last.iter().all(|&l| l > -1e-7));
    }

    #[test]
    fn both_equations_of_motion_agree(seed in any::<u64>(), p in params()) {
        let init = dicke(seed, false);
        let a = integrate(&init, &p, &short(), RhsChoice::DickeEq11).unwrap();
        let b = integrate(&init, &p, &short(), RhsChoice::BareEq1).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            prop_assert!((*x.rho() - *y.rho()).max_abs() < 1e-8);
        }
    }

    #[test]
    fn x_shape_is_preserved(seed in any::<u64>(), p in params()) {
        let traj = integrate(&dicke(seed, true), &p, &short(), RhsChoice::DickeEq11).unwrap();
        for s in &traj.states {
            prop_assert!(s.off_block_magnitude() < 1e-12, "{}", s.off_block_magnitude());
        }
    }

    #[test]
    fn without_phase_populations_do_not_feed_symmetric_antisymmetric_coherence(
        d in prop::array::uniform4(0.0..1.0f64),
        g12 in -1.0..1.0f64,
        o12 in -3.0..3.0f64,
    ) {
        let total: f64 = d.iter().sum::<f64>() + 1e-9;
        let rho = dicke_core::ComplexMatrix4::diag_real(d.map(|x| x / total));
        let p = SystemParams::new(1.0, g12, o12, 0.0, 0.0).unwrap();
        let drho = dicke_rhs(&rho, &p);
        prop_assert!(drho[(S, A)].norm() < 1e-15);
        prop_assert!(drho[(A, S)].norm() < 1e-15);
    }

    #[test]
    fn transition_frequency_drops_out(seed in any::<u64>(), p in params(), w0 in 0.0..20.0f64) {
        let init = dicke(seed, false);
        let a = integrate(&init, &p, &short(), RhsChoice::DickeEq11).unwrap();
        let b = integrate(&init, &p.with_omega0(w0), &short(), RhsChoice::DickeEq11).unwrap();
        for (x, y) in a.derived.iter().zip(&b.derived) {
            for (u, v) in x.values().iter().zip(y.values()) {
                prop_assert!((u - v).abs() < 1e-8);
            }
        }
    }
}
