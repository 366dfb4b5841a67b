//! Executes a [`RunConfig`].

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use triad_core::experiment::{
    default_delay_grid, default_phase_grid, delay_preparations, ideal_scan, simulate_counts,
    theta_for_phase, ExperimentSetup, Preparation, Recipe, ScanResult, EVENT_COLUMNS,
};
use triad_core::modes::{qubit_triad_phase, QubitTriadPhase};
use triad_core::oracle::{oracle_equivalence, ValidationReport};

use crate::config::{Format, Grid, Mode, RunConfig};
use crate::error::CliError;
use crate::output::{scan_csv, to_json, write_file};

/// Largest oracle deviation accepted by the validation suite.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub format: Option<Format>,
    pub out_dir: Option<PathBuf>,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    /// Human-readable lines for stdout.
    pub messages: Vec<String>,
}

pub fn run(mut config: RunConfig, opts: &RunOptions) -> Result<RunSummary, CliError> {
    config.provenance = None;
    if let Some(f) = opts.format {
        config.format = f;
    }
    let out_dir = opts.out_dir.clone().or_else(|| config.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    config.output = Some(out_dir.clone());
    let mut summary = RunSummary { out_dir: out_dir.clone(), files: Vec::new(), messages: Vec::new() };
    match config.mode {
        Mode::IdealScan | Mode::Experiment => run_scan(&mut config, &mut summary)?,
        Mode::Validate => run_validate(&mut config, &mut summary)?,
        Mode::QubitAnalysis => run_qubit(&mut config, &mut summary)?,
    }
    let ts = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    write_file(&out_dir, "timestamp.txt", &format!("{ts}\n"))?;
    summary.files.push("timestamp.txt".into());
    Ok(summary)
}

fn emit(summary: &mut RunSummary, name: &str, contents: &str) -> Result<(), CliError> {
    write_file(&summary.out_dir, name, contents)?;
    summary.files.push(name.to_string());
    Ok(())
}

fn write_metadata(config: &RunConfig, summary: &mut RunSummary) -> Result<(), CliError> {
    emit(summary, "metadata.json", &to_json(config)?)
}

fn columns(config: &RunConfig) -> Result<Vec<String>, CliError> {
    match &config.events {
        None => Ok(EVENT_COLUMNS.iter().map(|s| s.to_string()).collect()),
        Some(list) => {
            if list.is_empty() {
                return Err(CliError::Config("events: list is empty".into()));
            }
            for e in list {
                if !EVENT_COLUMNS.contains(&e.as_str()) {
                    return Err(CliError::Config(format!(
                        "events: unknown event {e:?}; expected one of {}",
                        EVENT_COLUMNS.join(", ")
                    )));
                }
            }
            Ok(list.clone())
        }
    }
}

/// Axis label, axis values and the preparation at every point.
fn scan_points(prep: &Preparation, grid: &[f64]) -> (&'static str, Vec<Preparation>) {
    match prep.recipe {
        Recipe::Dynamic { .. } => (
            "phi",
            grid.iter()
                .map(|&phi| Preparation { omega: prep.omega, ..Preparation::dynamic(theta_for_phase(phi), prep.sigma) })
                .collect(),
        ),
        recipe => (
            "tau",
            delay_preparations(recipe, grid, prep.sigma)
                .into_iter()
                .map(|p| Preparation { omega: prep.omega, ..p })
                .collect(),
        ),
    }
}

fn run_scan(config: &mut RunConfig, summary: &mut RunSummary) -> Result<(), CliError> {
    let prep = config
        .preparation
        .ok_or_else(|| CliError::Config("preparation: required for scan modes".into()))?;
    let cols = columns(config)?;
    let grid_spec = config.grid.clone().unwrap_or_else(|| {
        let v = match prep.recipe {
            Recipe::Dynamic { .. } => default_phase_grid(),
            _ => default_delay_grid(prep.sigma),
        };
        Grid::Linspace { start: v[0], stop: v[v.len() - 1], points: v.len() }
    });
    let grid = grid_spec.values();
    if grid.is_empty() {
        return Err(CliError::Config("grid: no points".into()));
    }
    config.grid = Some(grid_spec);
    let (label, preps) = scan_points(&prep, &grid);
    let result: ScanResult = if config.mode == Mode::IdealScan {
        ideal_scan(label, grid.clone(), &preps)?
    } else {
        let cascade = config.cascade.resolve()?;
        let network_h = config.network.h.resolve()?;
        let network_v = match &config.network.v {
            Some(v) => v.resolve()?,
            None => network_h.clone(),
        };
        let setup = ExperimentSetup {
            source: config.source,
            cascade,
            herald_efficiency: config.herald_efficiency,
            network_h,
            network_v,
            trial_rate_hz: config.trial_rate_hz,
        };
        simulate_counts(label, grid.clone(), &preps, &setup)?
    };
    match config.format {
        Format::Csv => emit(summary, "series.csv", &scan_csv(&result, &cols))?,
        Format::Json => {
            let filtered = ScanResult {
                series: result.series.iter().filter(|s| cols.contains(&s.name)).cloned().collect(),
                ..result.clone()
            };
            emit(summary, "series.json", &to_json(&filtered)?)?
        }
    }
    for w in &result.metadata.warnings {
        summary.messages.push(format!("warning: {w}"));
    }
    summary.messages.push(format!("{} points on {} written to {}", grid.len(), label, summary.out_dir.display()));
    config.provenance = Some(json!({
        "library_version": triad_core::VERSION,
        "x_label": label,
        "columns": cols,
        "scan": result.metadata,
    }));
    write_metadata(config, summary)
}

fn run_validate(config: &mut RunConfig, summary: &mut RunSummary) -> Result<(), CliError> {
    let v = &config.validate;
    let report: ValidationReport = oracle_equivalence(v.instances, v.max_photons, config.seed)?;
    summary.messages.push(format!(
        "oracle equivalence: {} instances, {} events, max deviation {:.3e}",
        report.instances, report.events, report.max_deviation
    ));
    emit(summary, "validation.json", &to_json(&report)?)?;
    config.provenance = Some(json!({ "library_version": triad_core::VERSION, "tolerance": VALIDATION_TOLERANCE }));
    write_metadata(config, summary)?;
    if !(report.max_deviation < VALIDATION_TOLERANCE) {
        return Err(CliError::Numerical(format!(
            "oracle deviation {:.3e} exceeds {VALIDATION_TOLERANCE:e}",
            report.max_deviation
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct QubitReport {
    moduli: [f64; 3],
    feasible: bool,
    phases: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cos_gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measured_phase: Option<f64>,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    compatible: Option<bool>,
}

fn run_qubit(config: &mut RunConfig, summary: &mut RunSummary) -> Result<(), CliError> {
    let q = config
        .qubit
        .clone()
        .ok_or_else(|| CliError::Config("qubit: required for qubit-analysis".into()))?;
    let [r12, r23, r31] = q.moduli;
    let result = qubit_triad_phase(r12, r23, r31)?;
    let (feasible, cos_gamma) = match result {
        QubitTriadPhase::Phases(_) => (true, None),
        QubitTriadPhase::Infeasible { cos_gamma } => (false, Some(cos_gamma)),
    };
    let compatible = q.measured_phase.map(|phi| result.admits(phi, q.tolerance));
    let report = QubitReport {
        moduli: q.moduli,
        feasible,
        phases: result.phases().to_vec(),
        cos_gamma,
        measured_phase: q.measured_phase,
        tolerance: q.tolerance,
        compatible,
    };
    let phases: Vec<String> = report.phases.iter().map(|p| format!("{p:.6}")).collect();
    summary.messages.push(if feasible {
        format!("qubit-embeddable triad phases: [{}]", phases.join(", "))
    } else {
        format!("moduli admit no qubit embedding (cos gamma = {:.6})", cos_gamma.unwrap_or(f64::NAN))
    });
    if let Some(c) = compatible {
        summary.messages.push(format!(
            "measured phase {} qubit model (tolerance {})",
            if c { "is compatible with the" } else { "is incompatible with the" },
            q.tolerance
        ));
    }
    emit(summary, "qubit_analysis.json", &to_json(&report)?)?;
    config.provenance = Some(json!({ "library_version": triad_core::VERSION }));
    write_metadata(config, summary)
}

/// Loads and runs a configuration file.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunSummary, CliError> {
    run(RunConfig::load(path)?, opts)
}
