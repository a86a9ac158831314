use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::str::FromStr;

use rayon::prelude::*;

use super::{detect_events, run_scenario, InitialCondition, LabelledEvents, ScenarioError, ScenarioSpec, Table, ZERO_THRESHOLD};
use crate::analytic::MixedInitialSpec;
use crate::dynamics::{Observables, RhsChoice, Trajectory};
use crate::physics::Geometry;

/// Parameter varied across the curves of a figure or the rows of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Xi,
    Chi,
    A,
    R12,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Xi => "xi",
            SweepAxis::Chi => "chi",
            SweepAxis::A => "a",
            SweepAxis::R12 => "r12",
        }
    }

    fn apply(&self, base: &ScenarioSpec, value: f64) -> Result<ScenarioSpec, ScenarioError> {
        let mut spec = base.clone();
        match self {
            SweepAxis::Xi => spec.geometry.xi = value,
            SweepAxis::R12 => spec.geometry.r12_over_lambda = value,
            SweepAxis::Chi | SweepAxis::A => match &mut spec.initial {
                InitialCondition::Mixed(m) if *self == SweepAxis::Chi => m.chi = value,
                InitialCondition::Mixed(m) => m.a = value,
                _ => {
                    return Err(ScenarioError::Usage(format!(
                        "sweeping {} needs the mixed initial state",
                        self.name()
                    )))
                }
            },
        }
        spec.name = format!("{}:{}={}", base.name, self.name(), angle_label(value));
        Ok(spec)
    }
}

impl FromStr for SweepAxis {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "xi" => Ok(SweepAxis::Xi),
            "chi" => Ok(SweepAxis::Chi),
            "a" => Ok(SweepAxis::A),
            "r12" => Ok(SweepAxis::R12),
            other => Err(ScenarioError::Usage(format!("unknown sweep axis '{other}' (expected xi, chi, a or r12)"))),
        }
    }
}

/// Renders simple rational multiples of π as `pi/3`, `3pi/8`, ... and
/// everything else with shortest round-trip digits.
fn angle_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    for den in [1u32, 2, 3, 4, 6, 8, 12] {
        let num = v * den as f64 / PI;
        let rounded = num.round();
        if rounded != 0.0 && (num - rounded).abs() < 1e-9 && rounded.abs() <= 24.0 {
            let num = rounded as i64;
            let head = match num {
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                k => format!("{k}pi"),
            };
            return if den == 1 { head } else { format!("{head}/{den}") };
        }
    }
    format!("{v}")
}

fn plain_label(v: f64) -> String {
    format!("{v}")
}

/// Partial scenario used to adjust a figure's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub r12: Option<f64>,
    pub xi: Option<f64>,
    pub gamma: Option<f64>,
    pub t_max: Option<f64>,
    pub output_dt: Option<f64>,
    pub rhs_choice: Option<RhsChoice>,
    pub rel_tol: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub chi: Option<f64>,
    /// Replaces the list of curve parameter values.
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Quantity {
    Concurrence,
    ImRhoAs,
}

impl Quantity {
    fn name(&self) -> &'static str {
        match self {
            Quantity::Concurrence => "concurrence",
            Quantity::ImRhoAs => "im_rho_as",
        }
    }

    fn of(&self, o: &Observables) -> f64 {
        match self {
            Quantity::Concurrence => o.concurrence,
            Quantity::ImRhoAs => o.im_rho_as,
        }
    }
}

struct FigureLayout {
    quantity: Quantity,
    axis: SweepAxis,
    values: Vec<f64>,
    mixed: bool,
    a: Option<f64>,
    chi: f64,
    xi: f64,
}

fn layout(n: u32) -> Result<FigureLayout, ScenarioError> {
    use Quantity::*;
    use SweepAxis::*;
    let l = |quantity, axis, values: &[f64], mixed, a, chi, xi| FigureLayout {
        quantity,
        axis,
        values: values.to_vec(),
        mixed,
        a,
        chi,
        xi,
    };
    Ok(match n {
        3 => l(Concurrence, Xi, &[0.0, FRAC_PI_3, FRAC_PI_2], false, None, 0.0, 0.0),
        4 => l(ImRhoAs, Xi, &[0.0], false, None, 0.0, 0.0),
        5 => l(Concurrence, Chi, &[0.0, FRAC_PI_4, FRAC_PI_2], true, Some(0.6), 0.0, FRAC_PI_2),
        6 => l(Concurrence, A, &[0.2, 0.5, 0.8], true, None, FRAC_PI_2, FRAC_PI_2),
        7 => l(Concurrence, Xi, &[FRAC_PI_2, 0.0], true, None, FRAC_PI_2, 0.0),
        8 => l(ImRhoAs, Xi, &[FRAC_PI_2, 0.0], true, None, FRAC_PI_2, 0.0),
        other => return Err(ScenarioError::Usage(format!("no figure {other}; expected 3 to 8"))),
    })
}

fn spec_parameters(spec: &ScenarioSpec) -> Result<BTreeMap<String, String>, ScenarioError> {
    let params = spec.params()?;
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        p.insert(k.to_string(), v);
    };
    put("initial", spec.initial.label().into());
    put("r12", plain_label(spec.geometry.r12_over_lambda));
    put("xi", plain_label(spec.geometry.xi));
    put("orientation", serde_json::to_string(&spec.geometry.orientation).unwrap_or_default());
    put("gamma", plain_label(spec.gamma));
    put("gamma12", plain_label(params.gamma12));
    put("omega12", plain_label(params.omega12));
    put("phi", plain_label(params.phi));
    put("tmax", plain_label(spec.t_max));
    put("dt-out", plain_label(spec.output_dt));
    put("rhs", spec.rhs_choice.label().into());
    put("rtol", plain_label(spec.rel_tol));
    if let InitialCondition::Mixed(m) = spec.initial {
        put("a", plain_label(m.a));
        put("b", plain_label(m.b));
        put("c", plain_label(m.c));
        put("chi", plain_label(m.chi));
    }
    Ok(p)
}

fn run_all(specs: &[ScenarioSpec]) -> Result<Vec<Trajectory>, ScenarioError> {
    specs.par_iter().map(run_scenario).collect()
}

/// One curve per parameter value of a figure: concurrence for 3, 5, 6, 7 and
/// `Im ρ_as` for 4, 8, against `γt`.
pub fn figure(n: u32, overrides: &FigureOverrides) -> Result<Table, ScenarioError> {
    let lay = layout(n)?;
    let o = overrides;
    if (7..=8).contains(&n) && o.a.is_none() && !matches!(lay.axis, SweepAxis::A) {
        return Err(ScenarioError::Usage(format!("figure {n} needs an explicit --a")));
    }
    let single = match lay.axis {
        SweepAxis::Xi => o.xi,
        SweepAxis::Chi => o.chi,
        SweepAxis::A => o.a,
        SweepAxis::R12 => o.r12,
    };
    let values = match (&o.values, single) {
        (Some(v), _) => v.clone(),
        (None, Some(v)) => vec![v],
        (None, None) => lay.values.clone(),
    };
    if values.is_empty() {
        return Err(ScenarioError::Usage("empty value list".into()));
    }

    let initial = if lay.mixed {
        let a = o.a.or(lay.a).unwrap_or(lay.values[0]);
        InitialCondition::Mixed(MixedInitialSpec { a, b: o.b.unwrap_or(1.0), c: o.c.unwrap_or(1.0), chi: o.chi.unwrap_or(lay.chi) })
    } else {
        InitialCondition::Symmetric
    };
    let d = ScenarioSpec::default();
    let base = ScenarioSpec {
        name: format!("figure-{n}"),
        initial,
        geometry: Geometry { r12_over_lambda: o.r12.unwrap_or(0.125), xi: o.xi.unwrap_or(lay.xi), ..d.geometry },
        gamma: o.gamma.unwrap_or(d.gamma),
        t_max: o.t_max.unwrap_or(d.t_max),
        output_dt: o.output_dt.unwrap_or(d.output_dt),
        rhs_choice: o.rhs_choice.unwrap_or(d.rhs_choice),
        rel_tol: o.rel_tol.unwrap_or(d.rel_tol),
    };

    let specs = values.iter().map(|&v| lay.axis.apply(&base, v)).collect::<Result<Vec<_>, _>>()?;
    let runs = run_all(&specs)?;

    let labels: Vec<String> = values.iter().map(|&v| format!("{}:{}={}", lay.quantity.name(), lay.axis.name(), angle_label(v))).collect();
    let mut parameters = spec_parameters(&specs[0])?;
    parameters.remove(lay.axis.name());
    if lay.axis == SweepAxis::Xi {
        parameters.remove("phi");
    }
    parameters.insert("figure".into(), n.to_string());
    parameters.insert("quantity".into(), lay.quantity.name().into());
    parameters.insert("curves".into(), format!("{} in [{}]", lay.axis.name(), values.iter().map(|v| angle_label(*v)).collect::<Vec<_>>().join(", ")));

    let x = runs[0].times.clone();
    let rows = (0..x.len()).map(|k| runs.iter().map(|r| Some(lay.quantity.of(&r.derived[k]))).collect()).collect();
    let events = labels
        .iter()
        .zip(&runs)
        .map(|(label, r)| LabelledEvents { label: label.clone(), events: detect_events(r, ZERO_THRESHOLD) })
        .collect();
    Ok(Table { name: base.name, parameters, x_label: "gamma_t".into(), columns: labels, x, rows, events })
}

/// Every observable of a single run against `γt`.
pub fn simulate_table(spec: &ScenarioSpec) -> Result<Table, ScenarioError> {
    let traj = run_scenario(spec)?;
    let rows = traj.derived.iter().map(|o| o.values().iter().map(|v| Some(*v)).collect()).collect();
    Ok(Table {
        name: spec.name.clone(),
        parameters: spec_parameters(spec)?,
        x_label: "gamma_t".into(),
        columns: Observables::COLUMNS.iter().map(|s| s.to_string()).collect(),
        events: vec![LabelledEvents { label: "concurrence".into(), events: detect_events(&traj, ZERO_THRESHOLD) }],
        x: traj.times,
        rows,
    })
}

pub const SWEEP_COLUMNS: [&str; 5] = ["min_concurrence", "death_time", "revival_time", "revival_amplitude", "death_count"];

/// One summary row per value: minimum concurrence, the first death and
/// revival, the first revival amplitude and the number of deaths.
pub fn sweep(axis: SweepAxis, values: &[f64], base: &ScenarioSpec) -> Result<Table, ScenarioError> {
    if values.is_empty() {
        return Err(ScenarioError::Usage("sweep needs at least one value".into()));
    }
    let specs = values.iter().map(|&v| axis.apply(base, v)).collect::<Result<Vec<_>, _>>()?;
    let runs = run_all(&specs)?;

    let mut rows = Vec::with_capacity(runs.len());
    let mut events = Vec::with_capacity(runs.len());
    for (v, r) in values.iter().zip(&runs) {
        let ev = detect_events(r, ZERO_THRESHOLD);
        let min_c = r.derived.iter().map(|o| o.concurrence).fold(f64::INFINITY, f64::min);
        rows.push(vec![
            Some(min_c),
            ev.death_times.first().copied(),
            ev.revival_times.first().copied(),
            ev.revival_amplitudes.first().copied(),
            Some(ev.death_times.len() as f64),
        ]);
        events.push(LabelledEvents { label: format!("{}={}", axis.name(), angle_label(*v)), events: ev });
    }
    let mut parameters = spec_parameters(base)?;
    parameters.remove(axis.name());
    if matches!(axis, SweepAxis::Xi | SweepAxis::R12) {
        for k in ["phi", "gamma12", "omega12"] {
            if axis == SweepAxis::R12 || k == "phi" {
                parameters.remove(k);
            }
        }
    }
    parameters.insert("zero_threshold".into(), plain_label(ZERO_THRESHOLD));
    Ok(Table {
        name: format!("sweep-{}", axis.name()),
        parameters,
        x_label: axis.name().into(),
        columns: SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect(),
        x: values.to_vec(),
        rows,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::symmetric_concurrence_nophase;

    #[test]
    fn angle_labels() {
        assert_eq!(angle_label(0.0), "0");
        assert_eq!(angle_label(FRAC_PI_2), "pi/2");
        assert_eq!(angle_label(FRAC_PI_3), "pi/3");
        assert_eq!(angle_label(3.0 * PI / 8.0), "3pi/8");
        assert_eq!(angle_label(PI), "pi");
        assert_eq!(angle_label(0.6), "0.6");
    }

    #[test]
    fn figure_three_perpendicular_curve_is_exponential() {
        let t = figure(3, &FigureOverrides::default()).unwrap();
        assert_eq!(t.columns, ["concurrence:xi=0", "concurrence:xi=pi/3", "concurrence:xi=pi/2"]);
        let g12 = ScenarioSpec::default().params().unwrap().gamma12;
        for (x, row) in t.x.iter().zip(&t.rows) {
            assert!((row[2].unwrap() - symmetric_concurrence_nophase(*x, 1.0, g12)).abs() < 1e-6);
        }
        assert_eq!(t.x.len(), 601);
    }

    #[test]
    fn figure_four_starts_at_zero() {
        let t = figure(4, &FigureOverrides::default()).unwrap();
        assert_eq!(t.columns.len(), 1);
        assert_eq!(t.rows[0][0], Some(0.0));
        assert!(t.rows.iter().any(|r| r[0].unwrap().abs() > 1e-3));
    }

    #[test]
    fn figure_six_dip_deepens_with_a() {
        let t = figure(6, &FigureOverrides { t_max: Some(2.0), ..Default::default() }).unwrap();
        let mins: Vec<f64> = (0..3)
            .map(|j| t.rows.iter().map(|r| r[j].unwrap()).fold(f64::INFINITY, f64::min))
            .collect();
        assert!(mins[0] > mins[1] && mins[1] > mins[2], "{mins:?}");
    }

    #[test]
    fn figures_seven_and_eight_need_a() {
        for n in [7, 8] {
            assert!(figure(n, &FigureOverrides::default()).unwrap_err().is_usage());
        }
        let t = figure(7, &FigureOverrides { a: Some(0.8), t_max: Some(1.0), ..Default::default() }).unwrap();
        assert_eq!(t.columns, ["concurrence:xi=pi/2", "concurrence:xi=0"]);
        assert_eq!(t.parameters["a"], "0.8");
        assert!(figure(9, &FigureOverrides::default()).is_err());
    }

    #[test]
    fn sweep_over_a_reports_deaths_for_large_a_only() {
        let base = ScenarioSpec {
            initial: InitialCondition::Mixed(MixedInitialSpec::unit_coherence(0.5, FRAC_PI_2)),
            t_max: 2.0,
            ..Default::default()
        };
        let t = sweep(SweepAxis::A, &[0.2, 0.4, 0.6, 0.8], &base).unwrap();
        let deaths = t.column("death_time").unwrap();
        assert_eq!(deaths[..3], [None, None, None]);
        assert!(deaths[3].is_some());
        assert!(t.to_csv().lines().any(|l| l.starts_with("2.00000000000e-1,") && l.ends_with(",,,0.00000000000e0")));
    }

    #[test]
    fn sweep_rejects_bad_input() {
        let base = ScenarioSpec::default();
        assert!(sweep(SweepAxis::Chi, &[0.1], &base).unwrap_err().is_usage());
        assert!(sweep(SweepAxis::Xi, &[], &base).unwrap_err().is_usage());
        assert!(sweep(SweepAxis::R12, &[-1.0], &base).unwrap_err().is_usage());
        assert!("theta".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn tables_are_deterministic() {
        let o = FigureOverrides { t_max: Some(1.0), ..Default::default() };
        let a = figure(5, &o).unwrap().to_csv();
        let b = figure(5, &o).unwrap().to_csv();
        assert_eq!(a, b);
    }
}
