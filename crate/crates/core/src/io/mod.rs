//! Configuration-driven runs and their file outputs.

pub mod config;
pub mod output;
pub mod run;

pub use config::{Command, ExperimentSpec, GridSpec, OutputSpec, RunConfig, ScanEntry, StateSpec, ValidatedRun};
pub use output::{emit_field_csv, emit_svg_plot, emit_trajectory_csv, read_field_csv, render_svg, write_atomic, PlotSeries};
pub use run::{run_config, RunOutcome};
