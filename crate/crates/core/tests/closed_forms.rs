use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use dicke_core::analytic::{symmetric_concurrence_phase, yu_eberly_limit};
use dicke_core::selftest::eighth_wavelength;
use dicke_core::{integrate, DickeState, IntegratorConfig, RhsChoice};

// independent scipy DOP853 integration at rtol 1e-12, r12 = λ/8
const AT_T2: [(f64, f64); 3] = [
    (FRAC_PI_4, 0.098_549_644_917_6),
    (FRAC_PI_8, 0.025_839_192_878_5),
    (3.0 * FRAC_PI_8, 0.207_371_484_166),
];

#[test]
fn symmetric_with_phase_matches_reference_values() {
    let cfg = IntegratorConfig::with_window(2.0, 0.5);
    for (phi, expected) in AT_T2 {
        let params = eighth_wavelength(phi);
        assert!((symmetric_concurrence_phase(2.0, &params) - expected).abs() < 1e-9, "closed form, phi = {phi}");
        let traj = integrate(&DickeState::symmetric(), &params, &cfg, RhsChoice::DickeEq11).unwrap();
        let c = traj.derived.last().unwrap().concurrence;
        assert!((c - expected).abs() < 1e-8, "integrated, phi = {phi}: {c}");
    }
}

#[test]
fn phase_slows_symmetric_decay_at_eighth_wavelength() {
    // γ12 = -Ω12 > 0 here, so rotating population into |a⟩ helps
    let c = |phi| symmetric_concurrence_phase(2.0, &eighth_wavelength(phi));
    assert!(c(0.0) < c(FRAC_PI_8));
    assert!(c(FRAC_PI_8) < c(FRAC_PI_4));
    assert!(c(FRAC_PI_4) < c(3.0 * FRAC_PI_8));
}

#[test]
fn independent_atom_limit_has_sudden_death_for_large_a() {
    // dies once a(1 - a + 2α² + α⁴a) reaches 1, which needs a > 1/3
    let death = |a: f64| (0..=5000).map(|k| k as f64 * 1e-3).find(|&t| yu_eberly_limit(t, a, 1.0).unwrap() <= 0.0);
    assert!(death(0.2).is_none());
    let (d6, d8) = (death(0.6).unwrap(), death(0.8).unwrap());
    assert!(d8 < d6, "{d8} vs {d6}");
}
