use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use dicke_core::scenarios::{self, ScenarioError, SweepAxis, Table};
use dicke_core::selftest::{self, ConformanceReport, Status};

mod settings;

use settings::Settings;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Discrepancy(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Discrepancy(_) => 4,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "dicke", version, about = "Entanglement dynamics of two dipole-coupled atoms in the timed Dicke basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one scenario and print every observable against gamma*t.
    Simulate(Common),
    /// Reproduce one of the figure tables (3 to 8).
    Figure {
        n: u32,
        /// Comma-separated curve parameters replacing the defaults.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// One summary row per parameter value.
    Sweep {
        /// xi, chi, a or r12.
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the closed-form solutions with the integrated dynamics.
    CheckAnalytic {
        /// Exit 0 even when a closed form disagrees.
        #[arg(long)]
        allow_discrepancy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full conformance catalog and print the JSON report.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Interatomic distance in wavelengths.
    #[arg(long, allow_hyphen_values = true)]
    r12: Option<String>,
    /// Excitation angle, radians or deg:<degrees>.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// symmetric, excited or mixed.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
    /// End time in units of 1/gamma.
    #[arg(long)]
    tmax: Option<String>,
    #[arg(long = "dt-out")]
    dt_out: Option<String>,
    #[arg(long)]
    rtol: Option<String>,
    /// eq11 (Dicke-basis element equations) or eq1 (operator Liouvillian).
    #[arg(long)]
    rhs: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Common {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        for (k, v) in [
            ("r12", &self.r12),
            ("xi", &self.xi),
            ("gamma", &self.gamma),
            ("initial", &self.initial),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("chi", &self.chi),
            ("tmax", &self.tmax),
            ("dt-out", &self.dt_out),
            ("rtol", &self.rtol),
            ("rhs", &self.rhs),
            ("out", &self.out),
            ("format", &self.format),
        ] {
            s.set(k, v.as_ref());
        }
        Ok(s)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit_table(table: &Table, s: &Settings) -> Result<(), CliError> {
    let format = s.get("format").unwrap_or("csv");
    let body = match format {
        "csv" => table.to_csv(),
        "json" => format!("{}\n", serde_json::to_string_pretty(&table.to_json()).expect("table serialises")),
        other => return Err(CliError::Usage(format!("--format must be csv or json, got '{other}'"))),
    };
    match s.get("out") {
        None => print!("{body}"),
        Some(out) => {
            let path = PathBuf::from(out);
            write_file(&path, &body)?;
            if format == "csv" {
                let sidecar = path.with_extension("json");
                if sidecar == path {
                    return Err(CliError::Usage(format!("{out}: a CSV export needs a path whose JSON sidecar differs from it")));
                }
                let summary = serde_json::to_string_pretty(&table.summary_json()).expect("summary serialises");
                write_file(&sidecar, &format!("{summary}\n"))?;
            }
        }
    }
    Ok(())
}

fn emit_report(report: &ConformanceReport, out: Option<&Path>) -> Result<(), CliError> {
    let json = format!("{}\n", report.to_json());
    match out {
        Some(path) => write_file(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn summarise(report: &ConformanceReport) {
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Discrepancy => "DISCREPANCY",
            Status::Fail => "FAIL",
        };
        eprintln!("{status:>11}  {:<32} max deviation {:.3e}", c.name, c.max_deviation);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(common) => {
            let s = common.settings()?;
            let table = scenarios::simulate_table(&s.scenario("simulate")?)?;
            emit_table(&table, &s)
        }
        Command::Figure { n, values, common } => {
            let mut s = common.settings()?;
            s.set("values", values.as_ref());
            // figures 3, 4, 5, 7 and 8 vary an angle
            let table = scenarios::figure(n, &s.figure_overrides(n != 6)?)?;
            emit_table(&table, &s)
        }
        Command::Sweep { axis, values, common } => {
            let mut s = common.settings()?;
            s.set("axis", axis.as_ref());
            s.set("values", values.as_ref());
            let axis: SweepAxis = s.get("axis").ok_or_else(|| CliError::Usage("sweep needs --axis".into()))?.parse()?;
            let values = s
                .values(matches!(axis, SweepAxis::Xi | SweepAxis::Chi))?
                .ok_or_else(|| CliError::Usage("sweep needs --values".into()))?;
            let base = s.scenario(&format!("sweep-{}", axis.name()))?;
            let table = scenarios::sweep(axis, &values, &base)?;
            emit_table(&table, &s)
        }
        Command::CheckAnalytic { allow_discrepancy, out } => {
            let report = selftest::run_analytic();
            summarise(&report);
            emit_report(&report, out.as_deref())?;
            if !report.ok() {
                return Err(CliError::Numerical("a forced agreement failed".into()));
            }
            let flagged: Vec<&str> =
                report.checks.iter().filter(|c| c.status == Status::Discrepancy).map(|c| c.name.as_str()).collect();
            if !flagged.is_empty() && !allow_discrepancy {
                return Err(CliError::Discrepancy(format!(
                    "closed form disagrees with the dynamics: {} (pass --allow-discrepancy to accept)",
                    flagged.join(", ")
                )));
            }
            Ok(())
        }
        Command::Selftest { seed, out } => {
            let report = selftest::run_all(seed);
            summarise(&report);
            emit_report(&report, out.as_deref())?;
            if report.ok() {
                Ok(())
            } else {
                Err(CliError::Numerical("conformance catalog has failing rows".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
