//! Flat `key = value` settings: config file first, command-line flags on top.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use dicke_core::analytic::MixedInitialSpec;
use dicke_core::scenarios::{FigureOverrides, InitialCondition, ScenarioSpec};
use dicke_core::{Geometry, RhsChoice};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

/// Keys a config file may set. `dt_out` is accepted as a spelling of `dt-out`.
pub const KEYS: [&str; 17] = [
    "r12", "xi", "gamma", "initial", "a", "b", "c", "chi", "tmax", "dt-out", "rtol", "rhs", "out", "format", "values",
    "axis", "seed",
];

fn canonical(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Settings {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("{origin}:{}: expected key = value", n + 1)));
            };
            let key = canonical(k);
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("{origin}:{}: unknown key '{}'", n + 1, k.trim())));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: Option<&String>) {
        if let Some(v) = value {
            self.values.insert(canonical(key), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_number(key, v)).transpose()
    }

    pub fn angle(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_angle(key, v)).transpose()
    }

    pub fn rhs(&self) -> Result<Option<RhsChoice>, CliError> {
        self.get("rhs")
            .map(|v| match v {
                "eq11" => Ok(RhsChoice::DickeEq11),
                "eq1" => Ok(RhsChoice::BareEq1),
                other => Err(CliError::Usage(format!("--rhs must be eq11 or eq1, got '{other}'"))),
            })
            .transpose()
    }

    fn mixed(&self) -> Result<MixedInitialSpec, CliError> {
        let a = self.number("a")?.ok_or_else(|| CliError::Usage("--initial mixed needs --a".into()))?;
        Ok(MixedInitialSpec {
            a,
            b: self.number("b")?.unwrap_or(1.0),
            c: self.number("c")?.unwrap_or(1.0),
            chi: self.angle("chi")?.unwrap_or(0.0),
        })
    }

    /// Scenario for `simulate` and `sweep`.
    pub fn scenario(&self, name: &str) -> Result<ScenarioSpec, CliError> {
        let initial = match self.get("initial").unwrap_or("symmetric") {
            "symmetric" => InitialCondition::Symmetric,
            "excited" => InitialCondition::DoublyExcited,
            "mixed" => InitialCondition::Mixed(self.mixed()?),
            other => return Err(CliError::Usage(format!("--initial must be symmetric, excited or mixed, got '{other}'"))),
        };
        let d = ScenarioSpec::default();
        Ok(ScenarioSpec {
            name: name.into(),
            initial,
            geometry: Geometry {
                r12_over_lambda: self.number("r12")?.unwrap_or(d.geometry.r12_over_lambda),
                xi: self.angle("xi")?.unwrap_or(d.geometry.xi),
                ..d.geometry
            },
            gamma: self.number("gamma")?.unwrap_or(d.gamma),
            t_max: self.number("tmax")?.unwrap_or(d.t_max),
            output_dt: self.number("dt-out")?.unwrap_or(d.output_dt),
            rhs_choice: self.rhs()?.unwrap_or(d.rhs_choice),
            rel_tol: self.number("rtol")?.unwrap_or(d.rel_tol),
        })
    }

    pub fn figure_overrides(&self, angle_values: bool) -> Result<FigureOverrides, CliError> {
        Ok(FigureOverrides {
            r12: self.number("r12")?,
            xi: self.angle("xi")?,
            gamma: self.number("gamma")?,
            t_max: self.number("tmax")?,
            output_dt: self.number("dt-out")?,
            rhs_choice: self.rhs()?,
            rel_tol: self.number("rtol")?,
            a: self.number("a")?,
            b: self.number("b")?,
            c: self.number("c")?,
            chi: self.angle("chi")?,
            values: self.values(angle_values)?,
        })
    }

    pub fn values(&self, angles: bool) -> Result<Option<Vec<f64>>, CliError> {
        self.get("values")
            .map(|list| {
                list.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|v| if angles { parse_angle("values", v) } else { parse_number("values", v) })
                    .collect()
            })
            .transpose()
    }
}

fn parse_number(key: &str, v: &str) -> Result<f64, CliError> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--{key}: '{v}' is not a number")))
}

/// Radians, or degrees with a `deg:` prefix.
pub fn parse_angle(key: &str, v: &str) -> Result<f64, CliError> {
    match v.strip_prefix("deg:") {
        Some(deg) => Ok(parse_number(key, deg)? * PI / 180.0),
        None => parse_number(key, v),
    }
}
