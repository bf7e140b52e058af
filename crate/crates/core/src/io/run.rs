//! Executes a validated configuration and writes its artifacts.

use serde_json::{json, Value};
use std::fs;
use std::path::Path;

use super::config::{Command, ExperimentSpec, RunConfig, StateSpec, ValidatedRun};
use super::output::{emit_field_csv, emit_svg_plot, emit_trajectory_csv, write_atomic, PlotSeries};
use crate::error::{LabError, Result};
use crate::experiments::ExperimentReport;
use crate::numerics::{Grid, PhysParams, Representation, WaveField};
use crate::operators::free_evolve;
use crate::states::{berry_balazs_initial, gaussian_packet, perelomov_state, xi_eigenstate_x};

/// Environment variable holding the number of worker threads for `scan`.
pub const WORKERS_ENV: &str = "AIRY_LAB_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// 0 all checks passed, 1 a tolerance failed, 2 invalid input or numerical error, 3 I/O error.
    pub exit_code: i32,
    pub message: String,
}

impl RunOutcome {
    fn from_error(e: &LabError) -> Self {
        let exit_code = if matches!(e, LabError::Io(_)) { 3 } else { 2 };
        Self { exit_code, message: format!("error: {e}") }
    }
}

/// Reads, validates and executes the configuration at `config_path`, writing outputs into `out_dir`.
pub fn run_config(config_path: &Path, out_dir: &Path, seed: Option<u64>) -> RunOutcome {
    let text = match fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => return RunOutcome::from_error(&LabError::Io(format!("{}: {e}", config_path.display()))),
    };
    let run = match RunConfig::parse(&text).and_then(RunConfig::validate) {
        Ok(r) => r,
        Err(e) => return RunOutcome::from_error(&e),
    };
    match execute(&run, out_dir, seed) {
        Ok((true, msg)) => RunOutcome { exit_code: 0, message: msg },
        Ok((false, msg)) => RunOutcome { exit_code: 1, message: msg },
        Err(e) => RunOutcome::from_error(&e),
    }
}

fn build_state(spec: &StateSpec, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    match *spec {
        StateSpec::Coherent { representation, .. } => {
            let c = spec.coherent().expect("coherent spec");
            c.validate()?;
            perelomov_state(&c, representation, grid, phys)
        }
        StateSpec::Gaussian { .. } => gaussian_packet(&spec.gaussian().expect("gaussian spec"), grid, phys),
        StateSpec::XiEigenstate { xi, t } => xi_eigenstate_x(xi, t, grid, phys),
        StateSpec::BerryBalazs { b } => berry_balazs_initial(b, grid, phys),
    }
}

fn norm(field: &WaveField) -> f64 {
    field.density().iter().sum::<f64>() * field.measure()
}

/// Position of the largest density sample.
fn argmax_x(field: &WaveField) -> f64 {
    let pos = field.to_rep(Representation::Position);
    let d = pos.density();
    let k = (0..d.len()).fold(0, |best, k| if d[k] > d[best] { k } else { best });
    pos.grid().x(k)
}

fn density_series(field: &WaveField, label: &str) -> PlotSeries {
    let pos = field.to_rep(Representation::Position);
    PlotSeries::new(label, pos.grid().x_values(), pos.density())
}

fn create_dir(out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| LabError::Io(format!("{}: {e}", out_dir.display())))
}

fn write_report(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| LabError::Io(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn execute(run: &ValidatedRun, out_dir: &Path, seed: Option<u64>) -> Result<(bool, String)> {
    let cfg = &run.config;
    let phys = cfg.phys;
    let out = |name: &str| out_dir.join(name);
    create_dir(out_dir)?;
    let mut report = json!({ "command": cfg.command, "config": cfg, "seed": seed });
    let (pass, message) = match cfg.command {
        Command::State => {
            let grid = run.grid.expect("validated grid");
            let field = build_state(cfg.state.as_ref().expect("validated state"), &grid, &phys)?;
            emit_field_csv(&field, &out(&cfg.outputs.state_csv))?;
            emit_svg_plot(&[density_series(&field, "|psi|^2")], "density", &out(&cfg.outputs.density_svg))?;
            report["result"] = json!({ "norm": norm(&field), "time": field.time() });
            (true, format!("state written to {}", out(&cfg.outputs.state_csv).display()))
        }
        Command::Evolve => {
            let grid = run.grid.expect("validated grid");
            let initial = build_state(cfg.state.as_ref().expect("validated state"), &grid, &phys)?;
            let mut peaks = Vec::with_capacity(cfg.taus.len());
            let mut plots = Vec::new();
            let mut last = initial.clone();
            for &tau in &cfg.taus {
                last = free_evolve(&initial, tau, &phys)?;
                peaks.push(argmax_x(&last));
                plots.push(density_series(&last, &format!("tau={tau}")));
            }
            emit_field_csv(&last, &out(&cfg.outputs.state_csv))?;
            emit_svg_plot(&plots, "density", &out(&cfg.outputs.density_svg))?;
            emit_trajectory_csv(&cfg.taus, &peaks, &out(&cfg.outputs.trajectory_csv))?;
            emit_svg_plot(
                &[PlotSeries::new("x_peak", cfg.taus.clone(), peaks.clone())],
                "peak trajectory",
                &out(&cfg.outputs.trajectory_svg),
            )?;
            report["result"] = json!({ "taus": cfg.taus, "x_peak": peaks, "norm": norm(&last) });
            (true, format!("evolved over {} times", cfg.taus.len()))
        }
        Command::Verify | Command::Scan => {
            let reports = run_jobs(&run.jobs, &phys, workers())?;
            let series: Vec<PlotSeries> = reports
                .iter()
                .flat_map(|r| r.series.iter().map(move |s| PlotSeries::new(&format!("{}:{}", r.name, s.label), s.x.clone(), s.y.clone())))
                .collect();
            if !series.is_empty() {
                emit_svg_plot(&series, "series", &out(&cfg.outputs.trajectory_svg))?;
            }
            let pass = reports.iter().all(|r| r.pass);
            let lines: Vec<String> = reports.iter().map(summary_line).collect();
            report["result"] = json!({ "pass": pass, "experiments": reports });
            (pass, lines.join("\n"))
        }
    };
    write_report(&out(&cfg.outputs.report), &report)?;
    Ok((pass, message))
}

fn summary_line(r: &ExperimentReport) -> String {
    let failed: Vec<&str> = r.metrics.iter().filter(|(_, m)| !m.pass).map(|(k, _)| k.as_str()).collect();
    if failed.is_empty() {
        format!("PASS {}", r.name)
    } else {
        format!("FAIL {} ({})", r.name, failed.join(", "))
    }
}

fn workers() -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0).unwrap_or(1)
}

/// Runs every job, in order, on up to `workers` threads. Results keep the job order.
pub fn run_jobs(jobs: &[(Grid, ExperimentSpec)], phys: &PhysParams, workers: usize) -> Result<Vec<ExperimentReport>> {
    if workers <= 1 || jobs.len() <= 1 {
        return jobs.iter().map(|(g, e)| e.run(g, phys)).collect();
    }
    let chunk = jobs.len().div_ceil(workers);
    let results: Vec<Vec<Result<ExperimentReport>>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|(g, e)| e.run(g, phys)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("experiment worker panicked")).collect()
    });
    results.into_iter().flatten().collect()
}
