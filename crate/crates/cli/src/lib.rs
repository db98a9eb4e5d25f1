//! Experiment runner: figure presets, sweeps, and CSV/gnuplot artifacts
//! built on the `anscy` model library.

pub mod error;
pub mod presets;
pub mod runner;

pub use error::{CliError, Result};
pub use presets::{preset, Experiment, Preset};
pub use runner::{evaluate, gnuplot_script, load_config, run_experiment, ExperimentSpec, RunSummary, Table};
