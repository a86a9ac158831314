//! Conformance catalog: every pair of independent routes to the same quantity
//! is run against each other and summarised as one report row.
//!
//! Rows whose agreement is mathematically forced can `fail`; rows that test a
//! transcribed closed form report `discrepancy` with a deviation profile
//! instead.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    build_mixed_initial, mixed_terms, symmetric_concurrence_nophase, symmetric_concurrence_phase, yu_eberly_limit,
    AnalyticError, CoherenceOscillation, MixedInitialSpec,
};
use crate::complexmat::ComplexMatrix4;
use crate::dynamics::{
    dicke_rhs_with, integrate, integrate_sampled, IntegrationError, IntegratorConfig, RhsChoice, StepControl,
    Trajectory, Transcription,
};
use crate::entanglement::{concurrence_block, concurrence_dicke, concurrence_general};
use crate::physics::{level_shift, params_from_geometry, Geometry, SystemParams};
use crate::sampling::{random_block_state, random_density_matrix};
use crate::state::{to_dicke, BareState, DickeState, InvariantDefects, A, E, G, S};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Discrepancy,
    Fail,
}

/// Deviation of one formula/ODE pairing along a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationProfile {
    pub case: String,
    /// Over the samples where the formula could be evaluated.
    pub max_deviation: f64,
    pub max_deviation_time: f64,
    /// First sample where the deviation exceeds the tolerance or the formula
    /// cannot be evaluated.
    pub first_divergence_time: Option<f64>,
    /// First sample where the formula cannot be evaluated at all.
    pub first_failure_time: Option<f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformanceCheck {
    pub name: String,
    pub status: Status,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
    pub profiles: Vec<DeviationProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformanceReport {
    pub seed: u64,
    pub checks: Vec<ConformanceCheck>,
}

impl ConformanceReport {
    pub fn check(&self, name: &str) -> Option<&ConformanceCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Pass or discrepancy everywhere.
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Row names in catalog order.
pub const CATALOG: [&str; 10] = [
    "block_vs_general_concurrence",
    "dicke_vs_bare_evolution",
    "symmetric_nophase_closed_form",
    "symmetric_phase_closed_form",
    "mixed_nophase_closed_form",
    "independent_atom_limit",
    "trajectory_invariants",
    "omega0_invariance",
    "level_shift_zero",
    "published_transcription_audit",
];

pub const RANDOM_BLOCK_STATES: usize = 1000;
pub const RANDOM_EVOLUTION_STATES: usize = 50;
const EVOLUTION_WINDOW: f64 = 5.0;
const CLOSED_FORM_WINDOW: f64 = 6.0;

/// Couplings at `r₁₂ = λ/8` with random dipole orientation and the given phase.
pub fn eighth_wavelength(phi: f64) -> SystemParams {
    let geom = Geometry::random(0.125, FRAC_PI_2).expect("valid geometry");
    params_from_geometry(&geom, 1.0, 0.0).expect("valid couplings").with_phi(phi)
}

fn forced(name: &str, max_deviation: f64, tolerance: f64, detail: String) -> ConformanceCheck {
    let status = if max_deviation < tolerance { Status::Pass } else { Status::Fail };
    ConformanceCheck { name: name.into(), status, max_deviation, tolerance, detail, profiles: vec![] }
}

fn broken(name: &str, tolerance: f64, detail: String) -> ConformanceCheck {
    ConformanceCheck { name: name.into(), status: Status::Fail, max_deviation: f64::MAX, tolerance, detail, profiles: vec![] }
}

/// Trajectories produced by a check, kept for the invariant row.
type Produced = Vec<InvariantDefects>;

fn block_vs_general(seed: u64) -> ConformanceCheck {
    let name = CATALOG[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..RANDOM_BLOCK_STATES {
        let rho = random_block_state(&mut rng);
        let routes = (|| {
            let general = concurrence_general(&rho)?.c;
            let block = concurrence_block(&rho)?.c;
            let dicke = concurrence_dicke(&to_dicke(&BareState::new_unchecked(rho)))?.c;
            Ok::<_, crate::entanglement::EntanglementError>((general, block, dicke))
        })();
        match routes {
            Ok((g, b, d)) => worst = worst.max((b - g).abs()).max((d - g).abs()),
            Err(e) => return broken(name, tol::DUAL_FORMULATION, format!("state {k}: {e}")),
        }
    }
    forced(
        name,
        worst,
        1e-10,
        format!("{RANDOM_BLOCK_STATES} random X-shaped states; closed forms in both bases against the ρρ̃ spectrum"),
    )
}

fn dicke_initial(rho: ComplexMatrix4) -> DickeState {
    to_dicke(&BareState::new_unchecked(rho))
}

fn elementwise_gap(a: &Trajectory, b: &[ComplexMatrix4]) -> (f64, f64) {
    let mut worst = (0.0, 0.0);
    for ((t, x), y) in a.times.iter().zip(&a.states).zip(b) {
        let d = (*x.rho() - *y).max_abs();
        if d > worst.0 {
            worst = (d, *t);
        }
    }
    worst
}

/// Samples of the element equations with the printed `ρ_ea` coefficient,
/// without invariant checks (positivity is not preserved).
fn integrate_unchecked(initial: &DickeState, params: &SystemParams, cfg: &IntegratorConfig) -> Result<Vec<ComplexMatrix4>, IntegrationError> {
    let ctl = StepControl { rel_tol: cfg.rel_tol, abs_tol: cfg.abs_tol, max_step: cfg.max_step };
    let mut out = Vec::with_capacity(cfg.sample_count());
    integrate_sampled(
        |rho| dicke_rhs_with(rho, params, Transcription::AsPublished),
        *initial.rho(),
        &ctl,
        cfg.output_dt,
        cfg.sample_count(),
        |_, _, rho| {
            out.push(*rho);
            Ok::<(), IntegrationError>(())
        },
    )?;
    Ok(out)
}

/// Corrected element equations and the printed variant, both against the
/// operator-built Liouvillian.
fn dual_formulation(seed: u64) -> (ConformanceCheck, ConformanceCheck, Produced) {
    let (name, audit) = (CATALOG[1], CATALOG[9]);
    let params = eighth_wavelength(FRAC_PI_4);
    let cfg = IntegratorConfig::with_window(EVOLUTION_WINDOW, 0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let states: Vec<DickeState> = (0..RANDOM_EVOLUTION_STATES).map(|_| dicke_initial(random_density_matrix(&mut rng))).collect();

    let runs: Vec<_> = states
        .par_iter()
        .map(|s| {
            let dicke = integrate(s, &params, &cfg, RhsChoice::DickeEq11)?;
            let bare = integrate(s, &params, &cfg, RhsChoice::BareEq1)?;
            Ok::<_, crate::dynamics::DynamicsError>((dicke, bare))
        })
        .collect();

    let mut produced = Vec::new();
    let mut worst: f64 = 0.0;
    let mut pairs = Vec::new();
    for (k, r) in runs.into_iter().enumerate() {
        match r {
            Ok((d, b)) => {
                produced.extend([d.defects, b.defects]);
                let bare: Vec<ComplexMatrix4> = b.states.iter().map(|s| *s.rho()).collect();
                worst = worst.max(elementwise_gap(&d, &bare).0);
                pairs.push(b);
            }
            Err(e) => {
                let msg = format!("state {k}: {e}");
                return (broken(name, tol::DUAL_FORMULATION, msg.clone()), broken(audit, tol::DUAL_FORMULATION, msg), produced);
            }
        }
    }
    let check = forced(
        name,
        worst,
        tol::DUAL_FORMULATION,
        format!(
            "{RANDOM_EVOLUTION_STATES} random full-rank states at r12 = lambda/8, phi = pi/4, t in [0, {EVOLUTION_WINDOW}]; element equations against the operator-built Liouvillian"
        ),
    );

    // printed coefficient: same states, same reference
    let printed: Vec<_> = states.par_iter().map(|s| integrate_unchecked(s, &params, &cfg)).collect();
    let mut profiles = Vec::new();
    let mut worst_printed: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    let mut disagreeing = 0;
    for (k, (p, bare)) in printed.into_iter().zip(&pairs).enumerate() {
        let Ok(samples) = p else {
            profiles.push(DeviationProfile {
                case: format!("state {k}"),
                max_deviation: f64::MAX,
                max_deviation_time: 0.0,
                first_divergence_time: Some(0.0),
                first_failure_time: Some(0.0),
                diagnostics: BTreeMap::new(),
            });
            continue;
        };
        let mut first = None;
        let mut state_min = f64::INFINITY;
        for x in &samples {
            if let Ok(d) = InvariantDefects::measure(x) {
                state_min = state_min.min(d.min_eigenvalue);
            }
        }
        let reference: Vec<ComplexMatrix4> = bare.states.iter().map(|s| *s.rho()).collect();
        let mut gap = (0.0, 0.0);
        for ((t, x), y) in bare.times.iter().zip(&samples).zip(&reference) {
            let d = (*x - *y).max_abs();
            if first.is_none() && d >= tol::DUAL_FORMULATION {
                first = Some(*t);
            }
            if d > gap.0 {
                gap = (d, *t);
            }
        }
        if first.is_some() {
            disagreeing += 1;
        }
        worst_printed = worst_printed.max(gap.0);
        min_eig = min_eig.min(state_min);
        if profiles.len() < 5 {
            profiles.push(DeviationProfile {
                case: format!("state {k}"),
                max_deviation: gap.0,
                max_deviation_time: gap.1,
                first_divergence_time: first,
                first_failure_time: None,
                diagnostics: BTreeMap::from([("min_eigenvalue".to_string(), state_min)]),
            });
        }
    }
    // X-shaped states never see the coefficient
    let x_state = DickeState::symmetric();
    let x_gap = match (integrate_unchecked(&x_state, &params, &cfg), integrate(&x_state, &params, &cfg, RhsChoice::BareEq1)) {
        (Ok(a), Ok(b)) => a.iter().zip(&b.states).map(|(x, y)| (*x - *y.rho()).max_abs()).fold(0.0, f64::max),
        _ => f64::MAX,
    };
    profiles.push(DeviationProfile {
        case: "symmetric initial state".into(),
        max_deviation: x_gap,
        max_deviation_time: 0.0,
        first_divergence_time: (x_gap >= tol::DUAL_FORMULATION).then_some(0.0),
        first_failure_time: None,
        diagnostics: BTreeMap::new(),
    });
    let status = if worst_printed < tol::DUAL_FORMULATION { Status::Pass } else { Status::Discrepancy };
    let audit_check = ConformanceCheck {
        name: audit.into(),
        status,
        max_deviation: worst_printed,
        tolerance: tol::DUAL_FORMULATION,
        detail: format!(
            "rho_ea equation with feed coefficient +i sin(phi)(gamma12 + i Omega12) rho_es instead of -i sin(phi)(gamma12 - i Omega12) rho_es: \
             {disagreeing}/{RANDOM_EVOLUTION_STATES} states disagree with the operator-built Liouvillian, smallest eigenvalue reached {min_eig:.3e}; \
             X-shaped states deviate by {x_gap:.1e}"
        ),
        profiles,
    };
    (check, audit_check, produced)
}

fn profile<F>(case: String, times: &[f64], ode: &[f64], tolerance: f64, mut formula: F) -> DeviationProfile
where
    F: FnMut(f64) -> Result<f64, AnalyticError>,
{
    let mut p = DeviationProfile {
        case,
        max_deviation: 0.0,
        max_deviation_time: 0.0,
        first_divergence_time: None,
        first_failure_time: None,
        diagnostics: BTreeMap::new(),
    };
    for (&t, &c) in times.iter().zip(ode) {
        match formula(t) {
            Ok(v) if v.is_finite() => {
                let d = (v - c).abs();
                if d > p.max_deviation {
                    p.max_deviation = d;
                    p.max_deviation_time = t;
                }
                if d >= tolerance && p.first_divergence_time.is_none() {
                    p.first_divergence_time = Some(t);
                }
            }
            _ => {
                p.first_failure_time.get_or_insert(t);
                p.first_divergence_time.get_or_insert(t);
            }
        }
    }
    p
}

fn transcribed(name: &str, profiles: Vec<DeviationProfile>, detail: String) -> ConformanceCheck {
    let max_deviation = profiles.iter().map(|p| p.max_deviation).fold(0.0, f64::max);
    let clean = profiles.iter().all(|p| p.first_divergence_time.is_none());
    ConformanceCheck {
        name: name.into(),
        status: if clean { Status::Pass } else { Status::Discrepancy },
        max_deviation,
        tolerance: tol::ANALYTIC_AGREEMENT,
        detail,
        profiles,
    }
}

fn closed_form_run(initial: &DickeState, params: &SystemParams) -> Result<Trajectory, crate::dynamics::DynamicsError> {
    integrate(initial, params, &IntegratorConfig::with_window(CLOSED_FORM_WINDOW, 0.01), RhsChoice::DickeEq11)
}

fn symmetric_nophase() -> (ConformanceCheck, Produced) {
    let name = CATALOG[2];
    let params = eighth_wavelength(0.0);
    match closed_form_run(&DickeState::symmetric(), &params) {
        Ok(traj) => {
            let p = profile("phi = 0".into(), &traj.times, &traj.concurrence(), tol::ANALYTIC_AGREEMENT, |t| {
                Ok(symmetric_concurrence_nophase(t, params.gamma, params.gamma12))
            });
            let mut check = forced(
                name,
                p.max_deviation,
                tol::ANALYTIC_AGREEMENT,
                format!("rho_ss(0) = 1, gamma12 = {:.10}, t in [0, {CLOSED_FORM_WINDOW}]", params.gamma12),
            );
            check.profiles.push(p);
            (check, vec![traj.defects])
        }
        Err(e) => (broken(name, tol::ANALYTIC_AGREEMENT, e.to_string()), vec![]),
    }
}

fn symmetric_phase() -> (ConformanceCheck, Produced) {
    let name = CATALOG[3];
    let mut profiles = Vec::new();
    let mut produced = Vec::new();
    for (label, phi) in [("phi = pi/8", FRAC_PI_8), ("phi = pi/4", FRAC_PI_4), ("phi = 3pi/8", 3.0 * FRAC_PI_8)] {
        let params = eighth_wavelength(phi);
        match closed_form_run(&DickeState::symmetric(), &params) {
            Ok(traj) => {
                profiles.push(profile(label.into(), &traj.times, &traj.concurrence(), tol::ANALYTIC_AGREEMENT, |t| {
                    Ok(symmetric_concurrence_phase(t, &params))
                }));
                produced.push(traj.defects);
            }
            Err(e) => return (broken(name, tol::ANALYTIC_AGREEMENT, format!("{label}: {e}")), produced),
        }
    }
    let check = transcribed(name, profiles, format!("rho_ss(0) = 1 at r12 = lambda/8, t in [0, {CLOSED_FORM_WINDOW}]"));
    (check, produced)
}

fn mixed_nophase() -> (ConformanceCheck, Produced) {
    let name = CATALOG[4];
    let params = eighth_wavelength(0.0);
    let cases: Vec<(f64, f64, &str)> = [0.2, 0.6, 0.8]
        .into_iter()
        .flat_map(|a| [(a, 0.0, "0"), (a, FRAC_PI_4, "pi/4"), (a, FRAC_PI_2, "pi/2")])
        .collect();
    let runs: Vec<_> = cases
        .par_iter()
        .map(|&(a, chi, _)| {
            let spec = MixedInitialSpec::unit_coherence(a, chi);
            let initial = to_dicke(&build_mixed_initial(&spec).expect("valid mixed state"));
            closed_form_run(&initial, &params)
        })
        .collect();

    let mut profiles = Vec::new();
    let mut produced = Vec::new();
    for (&(a, chi, chi_label), run) in cases.iter().zip(runs) {
        let label = format!("a = {a}, chi = {chi_label}");
        let traj = match run {
            Ok(t) => t,
            Err(e) => return (broken(name, tol::ANALYTIC_AGREEMENT, format!("{label}: {e}")), produced),
        };
        produced.push(traj.defects);
        let spec = MixedInitialSpec::unit_coherence(a, chi);
        let c = traj.concurrence();
        let mut p = profile(label.clone(), &traj.times, &c, tol::ANALYTIC_AGREEMENT, |t| {
            crate::analytic::mixed_concurrence_nophase(t, &spec, &params)
        });
        let cos2 = profile(label, &traj.times, &c, tol::ANALYTIC_AGREEMENT, |t| {
            Ok(mixed_terms(t, &spec, &params, CoherenceOscillation::CosSquared)?.branch()?.max(0.0))
        });

        // each bracket against the same quantity built from the integrated state
        let (mut lead, mut coherence, mut population): (f64, f64, f64) = (0.0, 0.0, 0.0);
        let (mut cos2_coherence, mut eta2_gap): (f64, f64) = (0.0, 0.0);
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let ss_aa = s.population(S) - s.population(A);
            let im = s.element(A, S).im;
            let exact_coherence = (ss_aa * ss_aa + 4.0 * im * im).sqrt();
            let exact_population = 2.0 * (s.population(E) * s.population(G)).max(0.0).sqrt();
            if let Ok(m) = mixed_terms(*t, &spec, &params, CoherenceOscillation::Cosh) {
                lead = lead.max((m.prefactor * m.lead - ss_aa).abs());
                coherence = coherence.max((m.prefactor * m.coherence - exact_coherence).abs());
                if let Some(root) = m.population() {
                    population = population.max((m.prefactor * root - exact_population).abs());
                }
                eta2_gap = eta2_gap.max((m.eta2 - (1.0 - s.population(G))).abs());
            }
            if let Ok(m) = mixed_terms(*t, &spec, &params, CoherenceOscillation::CosSquared) {
                cos2_coherence = cos2_coherence.max((m.prefactor * m.coherence - exact_coherence).abs());
            }
        }
        p.diagnostics.insert("cos_squared_variant_max_deviation".into(), cos2.max_deviation);
        if let Some(t) = cos2.first_failure_time {
            p.diagnostics.insert("cos_squared_variant_first_failure_time".into(), t);
        }
        p.diagnostics.insert("population_difference_term_max_deviation".into(), lead);
        p.diagnostics.insert("coherence_term_max_deviation".into(), coherence);
        p.diagnostics.insert("coherence_term_cos_squared_max_deviation".into(), cos2_coherence);
        p.diagnostics.insert("double_excitation_term_max_deviation".into(), population);
        p.diagnostics.insert("eta2_minus_one_minus_rho_gg_max".into(), eta2_gap);
        profiles.push(p);
    }
    let check = transcribed(
        name,
        profiles,
        format!(
            "b = c = 1, phi = 0, r12 = lambda/8, t in [0, {CLOSED_FORM_WINDOW}]; diagnostics compare each bracket, scaled by (2/3)exp(-2 gamma t), \
             with rho_ss - rho_aa, sqrt((rho_ss - rho_aa)^2 + 4 Im(rho_as)^2) and 2 sqrt(rho_ee rho_gg) from the integrated state; \
             the double-excitation root is compared only where 1 - eta2 >= 0"
        ),
    );
    (check, produced)
}

fn independent_atoms() -> (ConformanceCheck, Produced) {
    let name = CATALOG[5];
    let a = 0.6;
    let params = SystemParams::new(1.0, 0.0, 0.0, 0.0, 0.0).expect("valid params");
    let mut profiles = Vec::new();
    let mut produced = Vec::new();
    let mut curves = Vec::new();
    for (label, chi) in [("chi = 0", 0.0), ("chi = pi/4", FRAC_PI_4), ("chi = pi/2", FRAC_PI_2)] {
        let initial = to_dicke(&build_mixed_initial(&MixedInitialSpec::unit_coherence(a, chi)).expect("valid mixed state"));
        match closed_form_run(&initial, &params) {
            Ok(traj) => {
                let c = traj.concurrence();
                profiles.push(profile(format!("a = {a}, {label}"), &traj.times, &c, tol::ANALYTIC_AGREEMENT, |t| {
                    yu_eberly_limit(t, a, params.gamma)
                }));
                produced.push(traj.defects);
                curves.push(c);
            }
            Err(e) => return (broken(name, tol::ANALYTIC_AGREEMENT, format!("{label}: {e}")), produced),
        }
    }
    let spread = curves[1..]
        .iter()
        .flat_map(|c| c.iter().zip(&curves[0]).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    let formula = profiles.iter().map(|p| p.max_deviation).fold(0.0, f64::max);
    let ok = formula < tol::ANALYTIC_AGREEMENT && spread < 1e-8;
    let check = ConformanceCheck {
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        max_deviation: formula,
        tolerance: tol::ANALYTIC_AGREEMENT,
        detail: format!("gamma12 = Omega12 = 0, a = {a}, b = c = 1; largest change across chi {spread:.3e} (allowed 1e-8)"),
        profiles,
    };
    (check, produced)
}

fn omega0_invariance(seed: u64) -> (ConformanceCheck, Produced) {
    let name = CATALOG[7];
    let params = eighth_wavelength(FRAC_PI_4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let initial = dicke_initial(random_density_matrix(&mut rng));
    let cfg = IntegratorConfig::with_window(CLOSED_FORM_WINDOW, 0.01);
    let runs = (
        integrate(&initial, &params, &cfg, RhsChoice::DickeEq11),
        integrate(&initial, &params.with_omega0(10.0), &cfg, RhsChoice::DickeEq11),
    );
    match runs {
        (Ok(a), Ok(b)) => {
            let mut worst: f64 = 0.0;
            for (x, y) in a.derived.iter().zip(&b.derived) {
                for (u, v) in x.values().iter().zip(y.values()) {
                    worst = worst.max((u - v).abs());
                }
            }
            let check = forced(
                name,
                worst,
                1e-8,
                "omega0 = 0 against omega0 = 10 gamma from a random state: populations, rho_as, |rho_eg| and concurrence".into(),
            );
            (check, vec![a.defects, b.defects])
        }
        (Err(e), _) | (_, Err(e)) => (broken(name, 1e-8, e.to_string()), vec![]),
    }
}

fn level_shift_zero() -> ConformanceCheck {
    let name = CATALOG[8];
    let geom = Geometry::random(0.5, PI / 3.0).expect("valid geometry");
    match params_from_geometry(&geom, 1.0, 0.0) {
        Ok(p) => forced(
            name,
            level_shift(&p).abs(),
            1e-12,
            format!("r12 = lambda/2, xi = pi/3: phi = {:.15}, Omega12 = {:.6}", p.phi, p.omega12),
        ),
        Err(e) => broken(name, 1e-12, e.to_string()),
    }
}

fn invariants(all: &[InvariantDefects]) -> ConformanceCheck {
    let worst = all.iter().copied().fold(InvariantDefects::ideal(), InvariantDefects::worst);
    let excess = (worst.trace / 1e-9).max(worst.hermiticity / 1e-9).max(-worst.min_eigenvalue / 1e-7);
    let ok = worst.trace < 1e-9 && worst.hermiticity < 1e-9 && worst.min_eigenvalue > -1e-7;
    ConformanceCheck {
        name: CATALOG[6].into(),
        status: if ok { Status::Pass } else { Status::Fail },
        // in units of the respective tolerance
        max_deviation: excess.max(0.0),
        tolerance: 1.0,
        detail: format!(
            "{} trajectories: |tr - 1| <= {:.3e}, hermiticity defect <= {:.3e}, smallest eigenvalue {:.3e}",
            all.len(),
            worst.trace,
            worst.hermiticity,
            worst.min_eigenvalue
        ),
        profiles: vec![],
    }
}

/// Runs the whole catalog. The report depends only on `seed`.
pub fn run_all(seed: u64) -> ConformanceReport {
    enum Row {
        One(ConformanceCheck, Produced),
        Two(ConformanceCheck, ConformanceCheck, Produced),
    }
    let jobs: Vec<u8> = vec![1, 2, 3, 4, 5, 6, 8, 9];
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&j| match j {
            1 => Row::One(block_vs_general(seed), vec![]),
            2 => {
                let (a, b, p) = dual_formulation(seed);
                Row::Two(a, b, p)
            }
            3 => {
                let (c, p) = symmetric_nophase();
                Row::One(c, p)
            }
            4 => {
                let (c, p) = symmetric_phase();
                Row::One(c, p)
            }
            5 => {
                let (c, p) = mixed_nophase();
                Row::One(c, p)
            }
            6 => {
                let (c, p) = independent_atoms();
                Row::One(c, p)
            }
            8 => {
                let (c, p) = omega0_invariance(seed);
                Row::One(c, p)
            }
            _ => Row::One(level_shift_zero(), vec![]),
        })
        .collect();

    let mut checks = Vec::new();
    let mut produced = Vec::new();
    let mut audit = None;
    for row in rows {
        match row {
            Row::One(c, p) => {
                checks.push(c);
                produced.extend(p);
            }
            Row::Two(c, a, p) => {
                checks.push(c);
                audit = Some(a);
                produced.extend(p);
            }
        }
    }
    checks.push(invariants(&produced));
    checks.extend(audit);
    checks.sort_by_key(|c| CATALOG.iter().position(|n| *n == c.name));
    ConformanceReport { seed, checks }
}

/// The closed-form rows only: the symmetric and mixed-state formulas and the
/// independent-atom limit against the integrated dynamics.
pub fn run_analytic() -> ConformanceReport {
    let rows: Vec<(ConformanceCheck, Produced)> = [3u8, 4, 5, 6]
        .par_iter()
        .map(|j| match j {
            3 => symmetric_nophase(),
            4 => symmetric_phase(),
            5 => mixed_nophase(),
            _ => independent_atoms(),
        })
        .collect();
    ConformanceReport { seed: 0, checks: rows.into_iter().map(|(c, _)| c).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_shift_row_passes() {
        assert_eq!(level_shift_zero().status, Status::Pass);
    }

    #[test]
    fn block_row_passes_for_several_seeds() {
        for seed in [0, 1, 99] {
            assert_eq!(block_vs_general(seed).status, Status::Pass);
        }
    }

    #[test]
    fn profile_marks_failures_and_divergence() {
        let times = [0.0, 1.0, 2.0, 3.0];
        let ode = [1.0, 0.5, 0.25, 0.125];
        let p = profile("x".into(), &times, &ode, 1e-6, |t| {
            if t < 1.5 {
                Ok(ode[t as usize])
            } else if t < 2.5 {
                Ok(0.3)
            } else {
                Err(AnalyticError::NegativeRadicand { t, value: -1.0 })
            }
        });
        assert_eq!(p.first_divergence_time, Some(2.0));
        assert_eq!(p.first_failure_time, Some(3.0));
        assert!((p.max_deviation - 0.05).abs() < 1e-15);
    }

    #[test]
    fn invariant_row_flags_negative_eigenvalues() {
        let bad = InvariantDefects { hermiticity: 0.0, trace: 0.0, min_eigenvalue: -1e-6 };
        assert_eq!(invariants(&[InvariantDefects::ideal(), bad]).status, Status::Fail);
        assert_eq!(invariants(&[InvariantDefects::ideal()]).status, Status::Pass);
    }
}
